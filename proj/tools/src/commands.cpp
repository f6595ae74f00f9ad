#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Core>
#include <rapidjson/rapidjson.h>

#include "polyball/berezin.hpp"
#include "polyball/beurling.hpp"
#include "polyball/errors.hpp"
#include "polyball/wold.hpp"

namespace lab {

using namespace polyball;

namespace {

std::vector<double> spectrum_of(const Matrix& hermitian) {
  const auto ev = linalg::hermitian_eigenvalues(hermitian);
  return {ev.data(), ev.data() + ev.size()};
}

std::string mask_name(std::uint32_t mask, std::size_t k) {
  std::string out = "A";
  bool any = false;
  for (std::size_t i = 0; i < k; ++i) {
    if ((mask >> i) & 1u) {
      out += (any ? "," : "_") + std::to_string(i + 1);
      any = true;
    }
  }
  return any ? out : "A_empty";
}

void add_operators(Report& r, const RowTuple& t, const std::string& prefix) {
  for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
    for (int s = 1; s <= t.lambda().arity(i); ++s) {
      r.matrices[prefix + "_" + std::to_string(i) + "_" + std::to_string(s)] = t.op(i, s);
    }
  }
}

void run_check_cmd(const RunConfig& cfg, Report& r) {
  const auto t = parse_tuple(cfg, cfg.raw.at("tuple"), "/tuple");
  const auto rep = check_membership(t, cfg.tol);
  r.result = rep.to_json();
  double worst = 0.0;
  for (const auto& s : rep.positivity) worst = std::min(worst, s.min_eigenvalue);
  r.add("row contraction", rep.is_row_contraction, *std::max_element(rep.row_norms.begin(), rep.row_norms.end()), 1.0);
  r.add("lambda-commuting", rep.is_lambda_commuting, rep.commutation_residual, cfg.tol.algebraic);
  r.add("defect positivity", worst >= -cfg.tol.eigen, worst, -cfg.tol.eigen, "minimum over all subsets");
  r.add("member", rep.is_member, rep.is_member ? 0.0 : 1.0, 0.0);
  const Matrix d = defect(t);
  r.spectrum = spectrum_of(d);
  r.matrices["defect"] = d;
  add_operators(r, t, "T");
}

void run_rewrite_cmd(const RunConfig& cfg, Report& r) {
  const auto& lambda = cfg.lambda;
  const TruncatedModel model(lambda, cfg.degree_or(4));
  json out = json::array();
  const auto& words = cfg.raw.at("words");
  for (std::size_t q = 0; q < words.size(); ++q) {
    std::pair<Phase, LetterWord> w;
    try {
      w = parse_word(words[q].get<std::string>(), lambda);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), "/words/" + std::to_string(q));
    }
    const auto left = rewrite(lambda, w.second, Strategy::Leftmost);
    const auto right = rewrite(lambda, w.second, Strategy::Rightmost);
    const bool confluent = left.has_value() == right.has_value() &&
                           (!left || (left->phase == right->phase && left->word == right->word));
    const auto normal = reduce_word(lambda, w.second).scaled(w.first.value());
    const std::string tag = "[" + std::to_string(q) + "]";
    r.add("confluence" + tag, confluent, confluent ? 0.0 : 1.0, 0.0);
    int creators = 0;
    for (const auto& l : w.second) creators += !l.starred;
    if (model.interior(creators).empty()) {
      r.skip("faithful" + tag, "interior of degree D - " + std::to_string(creators) + " is empty");
    } else {
      const double res = interior_residual(build_matrix(model, reduce_word(lambda, w.second)).matrix,
                                           word_matrix(model, w.second).matrix, model, creators);
      r.add("faithful" + tag, res <= cfg.tol.algebraic, res, cfg.tol.algebraic);
    }
    out.push_back({{"word", words[q]}, {"normal_form", to_string(normal)}, {"is_zero", normal.is_zero()}});
  }
  r.result["normal_forms"] = out;
}

void run_vn_cmd(const RunConfig& cfg, Report& r) {
  const auto t = parse_tuple(cfg, cfg.raw.at("tuple"), "/tuple");
  const auto f = parse_polynomial(cfg.lambda, cfg.raw.at("polynomial"), "/polynomial");
  const auto rep = vn_check(t, f, cfg.degree, cfg.tol);
  r.result = {{"lhs", rep.lhs}, {"rhs", rep.rhs}, {"degree", rep.degree}, {"pass", rep.pass},
              {"polynomial", to_string(f)}};
  r.add("von Neumann inequality", rep.pass, rep.lhs - rep.rhs, 1e-9, "||f(T)|| - ||f(S)||");
  r.matrices["f_of_T"] = t.evaluate(f);
}

void run_berezin_cmd(const RunConfig& cfg, Report& r) {
  const auto t = parse_tuple(cfg, cfg.raw.at("tuple"), "/tuple");
  const bool pure = check_pure(t, cfg.tol).is_pure;
  r.spectrum = spectrum_of(defect(t));
  if (pure || !cfg.raw.contains("polynomial")) {
    const auto k = berezin_kernel(t, cfg.tol, cfg.degree);
    r.result["kernel"] = {{"degree", k.degree()},
                          {"defect_dim", k.defect_dim()},
                          {"nilpotency", k.nilpotency ? json(*k.nilpotency) : json(nullptr)},
                          {"isometry_residual", k.isometry_residual},
                          {"intertwining_residual", k.intertwining_residual}};
    const double bound = k.nilpotency ? cfg.tol.algebraic : 1e-8;
    r.add("kernel isometry", k.isometry_residual <= bound, k.isometry_residual, bound);
    r.add("kernel intertwining", k.intertwining_residual <= cfg.tol.algebraic, k.intertwining_residual,
          cfg.tol.algebraic);
    r.matrices["kernel"] = k.matrix;
  } else {
    r.skip("kernel isometry", "tuple is not pure; the transform is taken along rT");
  }
  if (cfg.raw.contains("polynomial")) {
    const auto f = parse_polynomial(cfg.lambda, cfg.raw.at("polynomial"), "/polynomial");
    std::vector<double> rs;
    if (cfg.raw.contains("radii")) rs = cfg.raw.at("radii").get<std::vector<double>>();
    const auto tr = berezin_transform(t, f, rs, cfg.tol);
    json inc = json::array();
    for (const auto& [rad, step] : tr.increments) inc.push_back({{"r", rad}, {"increment", step}});
    r.result["transform"] = {{"polynomial", to_string(f)},
                             {"norm", linalg::spectral_norm(tr.value)},
                             {"increments", inc}};
    if (tr.direct_residual) {
      r.result["transform"]["direct_residual"] = *tr.direct_residual;
      r.add("transform equals f(T)", *tr.direct_residual <= 1e-9, *tr.direct_residual, 1e-9);
    }
    r.matrices["transform"] = tr.value;
  }
}

void run_dilate_cmd(const RunConfig& cfg, Report& r) {
  const auto t = parse_tuple(cfg, cfg.raw.at("tuple"), "/tuple");
  const auto rec = minimal_dilation(t, cfg.tol, cfg.degree);
  r.result["dilation"] = rec.to_json();
  r.add("co-invariance", rec.coinvariance_residual <= cfg.tol.algebraic, rec.coinvariance_residual, cfg.tol.algebraic);
  r.add("compression", rec.compression_residual <= cfg.tol.algebraic, rec.compression_residual, cfg.tol.algebraic);
  r.add("span property", rec.span_ok, rec.span_degree, rec.span_guarantee, "contained degree vs guaranteed degree");
  r.matrices["kernel"] = rec.kernel.matrix;
  bool brehmer = true;
  for (int a : cfg.lambda.n()) brehmer = brehmer && a == 1;
  const int m = cfg.raw.value("moments", 3);
  if (!brehmer) {
    r.skip("Brehmer moments", "moments are defined for n = (1, ..., 1)");
  } else {
    const auto mom = moment_check(t, m, cfg.tol);
    double worst = 0.0;
    for (const auto& s : mom.samples) worst = std::max(worst, s.dilation_residual);
    r.result["moments"] = mom.to_json();
    r.add("Brehmer moments", mom.pass, worst, 1e-9, std::to_string(mom.moments) + " moments");
  }
}

void run_wold_cmd(const RunConfig& cfg, Report& r) {
  const auto spec = parse_pieces(cfg.lambda, cfg.raw.at("pieces"), "/pieces");
  const int d = cfg.degree_or(3);
  const auto a = assemble(cfg.lambda, spec, d);
  const auto proj = wold_projections(a, cfg.tol);
  const double worst = std::max({proj.idempotence, proj.orthogonality, proj.completeness, proj.commutation,
                                 proj.stabilization});
  r.add("projection identities", proj.pass, worst, cfg.tol.algebraic,
        "idempotent, orthogonal, complete, commuting, stable on the interior");
  const auto got = wandering_data(a, cfg.tol);
  const auto want = planted_data(cfg.lambda, spec);
  const std::size_t k = cfg.lambda.k();
  for (const auto& [mask, blk] : want.blocks) {
    const auto& g = got.blocks.at(mask);
    r.add("dim L_" + mask_name(mask, k).substr(2), g.dim == blk.dim, g.dim, blk.dim, "recovered vs planted");
    if (g.dim > 0) {
      r.add("kernel L_" + mask_name(mask, k).substr(2), g.kernel <= 1e-10, g.kernel, 1e-10,
            "L_A inside the kernels of V*_{i,s}, i in A");
    }
    for (const auto& [j, u] : g.unitaries) r.matrices["U_" + std::to_string(j) + "_on_" + mask_name(mask, k)] = u;
  }
  const auto eq = equivalence_check(got, want);
  std::string per;
  json verdicts = json::object();
  for (const auto& [mask, v] : eq.per_subset) {
    per += (per.empty() ? "" : ", ") + mask_name(mask, k) + ": " + to_string(v);
    verdicts[mask_name(mask, k)] = to_string(v);
  }
  r.add("recovered data matches planted", eq.verdict != Verdict::NotEquivalent, eq.verdict == Verdict::NotEquivalent,
        0.0, per);
  r.result = {{"degree", d},
              {"dim", a.tuple.dim()},
              {"spec", spec_to_json(spec)},
              {"wandering_data", got.to_json()},
              {"planted_verdict", to_string(eq.verdict)},
              {"planted_per_subset", verdicts}};
  if (cfg.raw.contains("compare")) {
    const auto other = parse_pieces(cfg.lambda, cfg.raw.at("compare"), "/compare");
    const auto b = assemble(cfg.lambda, other, d);
    const auto cmp = equivalence_check(got, wandering_data(b, cfg.tol));
    r.result["comparison"] = to_string(cmp.verdict);
  }
  for (const auto& [mask, p] : proj.subsets) r.matrices["P_" + mask_name(mask, k)] = p;
  r.spectrum = spectrum_of(defect(a.tuple));
}

void run_beurling_cmd(const RunConfig& cfg, Report& r) {
  const auto model = std::make_shared<TruncatedModel>(cfg.lambda, cfg.degree_or(4));
  const auto aux = cfg.raw.value("aux", std::size_t{1});
  if (!cfg.raw.contains("subspace") && !cfg.raw.contains("Y")) {
    throw ConfigError("beurling needs a subspace or Y", "");
  }
  if (cfg.raw.contains("subspace")) {
    const auto m = SubspaceHandle::from_vectors(model, aux, parse_vectors(*model, aux, cfg.raw.at("subspace"), "/subspace"));
    json sub{{"dim", m.dim()}, {"conditioning", m.conditioning}};
    const auto v = coinvariance_violation(m);
    sub["coinvariance_residual"] = v.residual;
    if (v.residual <= cfg.tol.eigen) {
      const auto span = coinvariant_span(m, cfg.tol.eigen);
      sub["span"] = span.to_json();
      r.add("span identity", span.pass, span.containment, cfg.tol.eigen,
            "contained degree " + std::to_string(span.contained_degree));
      const auto c = compression_model(m, cfg.tol);
      sub["compression"] = c.to_json();
      r.add("compression is a pure member", c.membership.is_member && c.membership.purity.is_pure, 0.0, 0.0);
      r.add("rank Delta_T(I) = dim L", c.rank_matches, static_cast<double>(c.defect_rank),
            static_cast<double>(c.wandering_dim));
      add_operators(r, c.tuple, "T");
    } else {
      const auto b = beurling_conditions(m, cfg.raw.value("buffer", 2), cfg.tol);
      sub["conditions"] = b.to_json();
      r.add("conditions (ii) and (iii) agree", b.positive == b.doubly, b.positive == b.doubly ? 0.0 : 1.0, 0.0,
            b.is_beurling ? "Beurling type" : "not Beurling type");
      r.spectrum = spectrum_of(shift_defect(*model, aux, m.projection()));
    }
    r.result["subspace"] = sub;
  }
  if (cfg.raw.contains("Y")) {
    const auto& yj = cfg.raw.at("Y");
    Matrix y;
    std::size_t y_aux = aux;
    if (yj.is_object() && yj.contains("planted_inner")) {
      Rng rng(cfg.require_seed("Y is sampled"));
      const auto p = random_inner(*model, rng, 2, yj.value("max_shift", 2));
      y = p.psi * p.psi.adjoint();
      y_aux = p.out_aux;
    } else {
      y = parse_matrix(yj, "/Y");
    }
    if (static_cast<std::size_t>(y.rows()) != model->dim() * y_aux || y.rows() != y.cols()) {
      throw ConfigError("Y must be square of size dim(model) * aux = " + std::to_string(model->dim() * y_aux), "/Y");
    }
    r.spectrum = spectrum_of(shift_defect(*model, y_aux, y));
    const auto f = beurling_factorize(model, y_aux, y, cfg.tol);
    r.result["factorization"] = f.to_json();
    r.add("Y = A A*", f.factor_residual <= 1e-8, f.factor_residual, 1e-8);
    r.add("A multi-analytic", f.analytic_residual <= 1e-8, f.analytic_residual, 1e-8);
    r.matrices["A"] = f.a;
  }
}

void run_suite_cmd(const RunConfig& cfg, Report& r) {
  SuiteOptions opts;
  opts.seed = cfg.require_seed("the suite is sampled");
  opts.degree = cfg.degree_or(4);
  opts.sample_scale = cfg.raw.value("sample_scale", 1.0);
  opts.enforce_time = cfg.raw.value("enforce_time", false);
  std::vector<int> ids;
  if (cfg.raw.contains("checks")) {
    ids = cfg.raw.at("checks").get<std::vector<int>>();
  } else {
    for (int id = 1; id <= kCheckCount; ++id) ids.push_back(id);
  }
  std::vector<CheckRecord> records;
  json out = json::array();
  for (int id : ids) {
    records.push_back(run_check(id, opts));
    const auto& rec = records.back();
    out.push_back(rec.to_json());
    r.checks.push_back({rec.name, rec.status, rec.value, rec.threshold, rec.detail});
  }
  r.result["records"] = out;
  r.summary = summary_table(records);
}

json versions() {
  return {{"polyball", POLYBALL_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"rapidjson", RAPIDJSON_VERSION_STRING}};
}

}  // namespace

bool Report::pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::Fail; });
}

void Report::add(std::string name, bool ok, double value, double threshold, std::string detail) {
  checks.push_back({std::move(name), ok ? Status::Pass : Status::Fail, value, threshold, std::move(detail)});
}

void Report::skip(std::string name, std::string reason) {
  checks.push_back({std::move(name), Status::Skipped, 0.0, 0.0, std::move(reason)});
}

Report run_command(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command;
  try {
    if (cfg.command == "check") run_check_cmd(cfg, r);
    else if (cfg.command == "rewrite") run_rewrite_cmd(cfg, r);
    else if (cfg.command == "vn") run_vn_cmd(cfg, r);
    else if (cfg.command == "berezin") run_berezin_cmd(cfg, r);
    else if (cfg.command == "dilate") run_dilate_cmd(cfg, r);
    else if (cfg.command == "wold") run_wold_cmd(cfg, r);
    else if (cfg.command == "beurling") run_beurling_cmd(cfg, r);
    else if (cfg.command == "suite") run_suite_cmd(cfg, r);
    else throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const RejectionError& e) {
    r.checks.push_back({"rejected", Status::Fail, 0.0, 0.0, e.what()});
  }
  if (r.summary.empty()) {
    std::ostringstream os;
    for (const auto& c : r.checks) os << '[' << to_string(c.status) << "] " << c.name << "  " << c.detail << '\n';
    r.summary = os.str();
  }
  return r;
}

void write_outputs(const Report& report, const RunConfig& cfg, double seconds) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"status", to_string(c.status)},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"pass", c.status != Status::Fail},
                      {"detail", c.detail}});
  }
  const json out{{"command", report.command},
                 {"config", cfg.raw},
                 {"checks", checks},
                 {"result", report.result},
                 {"pass", report.pass()},
                 {"versions", versions()},
                 {"wall_time_s", seconds}};
  std::ofstream(cfg.output_dir / "report.json") << out.dump(2) << '\n';
  if (!report.spectrum.empty()) {
    std::ofstream csv(cfg.output_dir / "spectra.csv");
    csv << "index,eigenvalue\n";
    csv.precision(17);
    for (std::size_t i = 0; i < report.spectrum.size(); ++i) csv << i << ',' << report.spectrum[i] << '\n';
  }
  if (!report.matrices.empty()) {
    fs::create_directories(cfg.output_dir / "matrices");
    for (const auto& [name, m] : report.matrices) {
      std::ofstream(cfg.output_dir / "matrices" / (name + ".json")) << matrix_to_json(m).dump() << '\n';
    }
  }
}

}  // namespace lab
