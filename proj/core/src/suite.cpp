#include "polyball/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "polyball/berezin.hpp"
#include "polyball/beurling.hpp"
#include "polyball/errors.hpp"
#include "polyball/samplers.hpp"
#include "polyball/wold.hpp"

namespace polyball {

namespace {

PhaseMatrix pair_lambda(std::int64_t turns, std::int64_t modulus) {
  const LambdaEntry e{1, 2, 1, 1, {turns, modulus}};
  return validate_lambda({1, 1}, std::span(&e, 1));
}

PhaseMatrix cfg_a() { return pair_lambda(1, 4); }

PhaseMatrix cfg_b() {
  const std::vector<LambdaEntry> raw{{1, 2, 1, 1, {1, 4}}, {1, 2, 2, 1, {1, 2}}};
  return validate_lambda({2, 1}, raw);
}

int samples(const SuiteOptions& o, int base) { return std::max(1, static_cast<int>(std::lround(base * o.sample_scale))); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Outcome {
  bool ok = false;
  bool skipped = false;
  double value = 0.0;
  std::string detail;
};

// Exact relations of the shifts, compared as monomial operators column by column.
Outcome interior_relations(const SuiteOptions& o) {
  Outcome out;
  std::size_t violations = 0;
  std::size_t columns = 0;
  for (const auto& l : {cfg_a(), cfg_b()}) {
    const TruncatedModel m(l, o.degree);
    const auto in1 = m.interior(1);
    const auto in2 = m.interior(2);
    if (in2.empty()) {
      out.skipped = true;
      out.detail = "interior of degree D-2 is empty";
      return out;
    }
    auto count = [&](const MonomialOperator& x, const MonomialOperator& y, const std::vector<std::size_t>& cols) {
      for (auto j : cols) {
        ++columns;
        if (!(x.column(j) == y.column(j))) ++violations;
      }
    };
    const auto id = MonomialOperator::identity(m.dim());
    for (int i = 1; i <= static_cast<int>(l.k()); ++i) {
      for (int s = 1; s <= l.arity(i); ++s) {
        const auto& si = m.letter_operator(Letter::S(i, s));
        const auto& sia = m.letter_operator(Letter::adj(i, s));
        for (int j = 1; j <= static_cast<int>(l.k()); ++j) {
          for (int t = 1; t <= l.arity(j); ++t) {
            const auto& sj = m.letter_operator(Letter::S(j, t));
            if (i != j) {
              const auto lam = l.lambda(i, j, s, t);
              if (i < j) count(si.compose(sj), sj.compose(si).times(lam), in2);
              count(sia.compose(sj), sj.compose(sia).times(lam.conj()), in1);
            } else {
              const auto prod = sia.compose(sj);
              if (s == t) {
                count(prod, id, in1);
              } else {
                count(prod, MonomialOperator(std::vector<MonomialOperator::Entry>(m.dim())), in1);
              }
            }
          }
        }
      }
    }
  }
  out.value = static_cast<double>(violations);
  out.ok = violations == 0;
  out.detail = std::to_string(columns) + " columns compared, " + std::to_string(violations) + " phase mismatches";
  return out;
}

Outcome confluence(const SuiteOptions& o, Rng& rng) {
  Outcome out;
  std::size_t violations = 0;
  std::size_t faithful = 0;
  const int words = samples(o, 500);
  for (const auto& l : {cfg_a(), cfg_b()}) {
    const TruncatedModel m(l, 2 * o.degree);
    for (int trial = 0; trial < words; ++trial) {
      const auto w = random_word(l, rng, 12);
      const auto left = rewrite(l, w, Strategy::Leftmost);
      const auto right = rewrite(l, w, Strategy::Rightmost);
      if (left.has_value() != right.has_value() || (left && (left->phase != right->phase || left->word != right->word))) {
        ++violations;
        continue;
      }
      int creators = 0;
      for (const auto& x : w) creators += !x.starred;
      const auto inner = m.interior(creators);
      if (inner.empty()) continue;
      ++faithful;
      auto direct = MonomialOperator::identity(m.dim());
      for (const auto& x : w) direct = direct.compose(m.letter_operator(x));
      auto via = MonomialOperator(std::vector<MonomialOperator::Entry>(m.dim()));
      if (left) {
        via = MonomialOperator::identity(m.dim());
        for (const auto& x : left->word) via = via.compose(m.letter_operator(x));
        via = via.times(left->phase);
      }
      for (auto j : inner) {
        if (!(direct.column(j) == via.column(j))) {
          ++violations;
          break;
        }
      }
    }
  }
  if (faithful == 0) {
    out.skipped = true;
    out.detail = "no word has a nonempty interior at this degree";
    return out;
  }
  out.value = static_cast<double>(violations);
  out.ok = violations == 0;
  out.detail = std::to_string(2 * words) + " words, " + std::to_string(faithful) + " matrix comparisons, " +
               std::to_string(violations) + " violations";
  return out;
}

Outcome uniqueness(const SuiteOptions& o, Rng& rng) {
  Outcome out;
  std::size_t wrong = 0;
  std::size_t zeros = 0;
  const int total = samples(o, 500);
  for (int trial = 0; trial < total; ++trial) {
    const auto l = trial % 2 ? cfg_b() : cfg_a();
    auto p = random_polynomial(l, rng, 4, 5);
    const double u = rng.uniform();
    if (u < 0.3) {
      p += p.scaled(-1.0);
    } else if (u < 0.4) {
      p = p.scaled(0.0);
    } else if (u < 0.6) {
      const auto q = random_polynomial(l, rng, 4, 3);
      p += q;
      p += q.scaled(-1.0);
    }
    bool coefficient = false;
    int beta = 0;
    for (const auto& [key, c] : p.terms()) {
      coefficient = coefficient || std::abs(c.value()) > 0.0;
      beta = std::max(beta, key.annihilators.total_degree());
    }
    bool acts = false;
    for (const auto& chi : enumerate_basis(l.n(), beta)) {
      for (const auto& [w, v] : symbolic_evaluate(l, p, chi)) acts = acts || std::abs(v) > 0.0;
      if (acts) break;
    }
    zeros += !coefficient;
    wrong += acts != coefficient;
  }
  out.value = static_cast<double>(wrong);
  out.ok = wrong == 0;
  out.detail = std::to_string(total) + " polynomials (" + std::to_string(zeros) + " zero), " + std::to_string(wrong) +
               " disagreements";
  return out;
}

Outcome truncated_norm() {
  Outcome out;
  const TruncatedModel m(PhaseMatrix::trivial({1}), 10);
  const Matrix j = m.shift(1, 1) + m.shift(1, 1).adjoint();
  const auto ev = linalg::hermitian_eigenvalues(j);
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  const double want = 2.0 * std::cos(std::numbers::pi / 12.0);
  out.value = std::abs(norm - want);
  out.ok = out.value <= 1e-12;
  out.detail = "||S+S*|| = " + fmt("%.15f", norm);
  return out;
}

Outcome berezin_suite(const SuiteOptions& o, Rng& rng) {
  Outcome out;
  const int total = samples(o, 100);
  for (int trial = 0; trial < total; ++trial) {
    const auto l = trial % 2 ? pair_lambda(1, 2) : cfg_a();
    const auto t = random_nilpotent_member(l, rng);
    const auto k = berezin_kernel(t);
    const double series = series_identity_residual(t, k.nilpotency.value_or(k.degree()));
    out.value = std::max({out.value, k.isometry_residual, k.intertwining_residual, series});
  }
  out.ok = out.value <= 1e-10;
  out.detail = std::to_string(total) + " members, worst residual " + fmt("%.3e", out.value);
  return out;
}

Outcome von_neumann(const SuiteOptions& o, Rng& rng) {
  Outcome out;
  const int total = samples(o, 200);
  std::size_t violations = 0;
  double slack = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < total; ++trial) {
    const auto l = trial % 2 ? cfg_b() : cfg_a();
    const auto t = random_nilpotent_member(l, rng);
    StarPolynomial f;
    do {
      f = random_polynomial(l, rng, 3, 4);
    } while (f.is_zero());
    const int d = joint_nilpotency(t).value_or(0);
    const auto rep = vn_check(t, f, d + 3);
    slack = std::max(slack, rep.lhs - rep.rhs);
    violations += !(rep.lhs <= rep.rhs + 1e-9);
  }
  out.value = static_cast<double>(violations);
  out.ok = violations == 0;
  out.detail = std::to_string(total) + " pairs, max(lhs - rhs) = " + fmt("%.3e", slack);
  return out;
}

Outcome wold_round_trip(const SuiteOptions& o, Rng& rng) {
  Outcome out;
  const int total = samples(o, 100);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < total; ++trial) {
    const auto r = random_spec(rng);
    const auto a = assemble(r.lambda, r.spec, r.degree);
    const auto proj = wold_projections(a);
    out.value = std::max({out.value, proj.idempotence, proj.orthogonality, proj.completeness, proj.commutation,
                          proj.stabilization});
    const auto got = wandering_data(a);
    const auto want = planted_data(r.lambda, r.spec);
    for (const auto& [mask, blk] : want.blocks) mismatches += got.blocks.at(mask).dim != blk.dim;
  }
  out.ok = mismatches == 0 && out.value <= 1e-10;
  out.detail = std::to_string(total) + " specs, " + std::to_string(mismatches) + " dimension mismatches, worst identity " +
               fmt("%.3e", out.value);
  return out;
}

Outcome beurling_suite(const SuiteOptions& o, Rng& rng) {
  Outcome out;
  if (o.degree < 2) {
    out.skipped = true;
    out.detail = "Delta(Y) interior of degree D-k is empty";
    return out;
  }
  const int total = samples(o, 50);
  for (int trial = 0; trial < total; ++trial) {
    const auto l = trial % 2 ? cfg_b() : cfg_a();
    const auto m = std::make_shared<TruncatedModel>(l, o.degree);
    const auto p = random_inner(*m, rng, 2, std::min(2, o.degree - 1));
    const auto f = beurling_factorize(m, p.out_aux, p.psi * p.psi.adjoint());
    out.value = std::max({out.value, f.factor_residual, f.analytic_residual});
  }
  const auto m = std::make_shared<TruncatedModel>(cfg_a(), o.degree);
  Matrix band = Matrix::Zero(static_cast<Eigen::Index>(m->dim()), static_cast<Eigen::Index>(m->dim()));
  for (std::size_t j = 0; j < m->dim(); ++j) {
    if (m->basis()[j].total_degree() >= 1) band(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
  }
  bool rejected = false;
  try {
    beurling_factorize(m, 1, band);
  } catch (const RejectionError&) {
    rejected = true;
  }
  out.ok = rejected && out.value <= 1e-8;
  out.detail = std::to_string(total) + " planted inner maps, worst residual " + fmt("%.3e", out.value) +
               (rejected ? ", counterexample rejected" : ", counterexample NOT rejected");
  return out;
}

Outcome moments(const SuiteOptions& o, Rng& rng) {
  Outcome out;
  const int total = samples(o, 50);
  std::size_t failed = 0;
  for (int trial = 0; trial < total; ++trial) {
    const auto l = trial % 2 ? pair_lambda(1, 2) : cfg_a();
    const auto t = random_nilpotent_member(l, rng);
    const auto rep = moment_check(t, 3);
    for (const auto& s : rep.samples) out.value = std::max(out.value, s.dilation_residual);
    failed += !rep.pass;
  }
  out.ok = failed == 0 && out.value <= 1e-9;
  out.detail = std::to_string(total) + " members, worst moment residual " + fmt("%.3e", out.value);
  return out;
}

Outcome rank_one() {
  Outcome out;
  const int d = 12;
  const int ref = 40;
  const auto one = PhaseMatrix::trivial({1});
  const TruncatedModel model(one, d);
  const TruncatedModel big(one, ref);
  CoefficientMap p;
  Vector full = Vector::Zero(ref + 1);
  for (int j = 0; j <= d; ++j) p[model.basis()[static_cast<std::size_t>(j)]] = std::ldexp(1.0, -j);
  for (int j = 0; j <= ref; ++j) full(j) = std::ldexp(1.0, -j);
  const Matrix target = full * full.adjoint();
  std::vector<double> errors;
  for (int m = 0; m <= d; ++m) {
    Matrix approx = Matrix::Zero(ref + 1, ref + 1);
    approx.topLeftCorner(d + 1, d + 1) = rank_one_approx(model, p, p, m).matrix;
    errors.push_back(linalg::spectral_norm(approx - target));
  }
  bool monotone = true;
  for (std::size_t m = 1; m < errors.size(); ++m) monotone = monotone && errors[m] < errors[m - 1];
  out.value = errors.back();
  out.ok = monotone && out.value <= 1e-3;
  out.detail = std::string(monotone ? "monotone" : "NOT monotone") + ", error at m=0 " + fmt("%.3e", errors.front()) +
               ", at m=12 " + fmt("%.3e", errors.back());
  return out;
}

struct Meta {
  const char* name;
  double threshold;
  double limit;
};

constexpr Meta kMeta[kCheckCount] = {
    {"interior relations (CFG-A, CFG-B)", 0.0, 1.0},
    {"rewriting confluence and faithfulness", 0.0, 5.0},
    {"uniqueness of normal-form polynomials", 0.0, 5.0},
    {"truncated norm of S + S*", 1e-12, 0.1},
    {"Berezin kernel suite", 1e-10, 10.0},
    {"von Neumann inequality", 0.0, 30.0},
    {"Wold round trip", 1e-10, 30.0},
    {"Beurling factorization", 1e-8, 20.0},
    {"dilation moments", 1e-9, 10.0},
    {"rank-one compact approximation", 1e-3, 1.0},
};

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

nlohmann::json CheckRecord::to_json(bool with_time) const {
  nlohmann::json j{{"id", id},
                   {"name", name},
                   {"status", polyball::to_string(status)},
                   {"value", value},
                   {"threshold", threshold},
                   {"detail", detail},
                   {"time_limit_s", time_limit}};
  if (with_time) j["wall_time_s"] = seconds;
  return j;
}

CheckRecord run_check(int id, const SuiteOptions& opts) {
  if (id < 1 || id > kCheckCount) throw UsageError("run_check: no check " + std::to_string(id));
  if (opts.degree < 0) throw UsageError("run_check: degree must be >= 0");
  const auto& meta = kMeta[id - 1];
  CheckRecord rec;
  rec.id = id;
  rec.name = meta.name;
  rec.threshold = meta.threshold;
  rec.time_limit = meta.limit;

  // each check draws from its own child stream, so checks can run alone
  Rng root(opts.seed);
  Rng rng = root.split();
  for (int j = 1; j < id; ++j) rng = root.split();

  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    switch (id) {
      case 1: out = interior_relations(opts); break;
      case 2: out = confluence(opts, rng); break;
      case 3: out = uniqueness(opts, rng); break;
      case 4: out = truncated_norm(); break;
      case 5: out = berezin_suite(opts, rng); break;
      case 6: out = von_neumann(opts, rng); break;
      case 7: out = wold_round_trip(opts, rng); break;
      case 8: out = beurling_suite(opts, rng); break;
      case 9: out = moments(opts, rng); break;
      case 10: out = rank_one(); break;
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.value = std::numeric_limits<double>::infinity();
    out.detail = std::string("exception: ") + e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.value = out.value;
  rec.detail = out.detail;
  if (out.skipped) {
    rec.status = Status::Skipped;
  } else if (!out.ok) {
    rec.status = Status::Fail;
  } else if (opts.enforce_time && rec.seconds > rec.time_limit) {
    rec.status = Status::Fail;
    rec.detail += "; exceeded time limit";
  } else {
    rec.status = Status::Pass;
  }
  return rec;
}

std::vector<CheckRecord> run_suite(const SuiteOptions& opts) {
  std::vector<CheckRecord> out;
  for (int id = 1; id <= kCheckCount; ++id) out.push_back(run_check(id, opts));
  return out;
}

std::string summary_table(const std::vector<CheckRecord>& records) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-3s %-40s %-8s %12s %10s  %s\n", "#", "check", "status", "value", "seconds", "detail");
  os << buf;
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%-3d %-40s %-8s %12.3e %10.3f  ", r.id, r.name.c_str(), to_string(r.status), r.value,
                  r.seconds);
    os << buf << r.detail << '\n';
  }
  return os.str();
}

}  // namespace polyball
