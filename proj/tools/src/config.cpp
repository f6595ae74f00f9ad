#include "config.hpp"

#include <cstdio>

#include "polyball/errors.hpp"
#include "polyball/random.hpp"
#include "polyball/samplers.hpp"

namespace lab {

using namespace polyball;

namespace {

cplx parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Fraction parse_turn_value(const json& j) {
  if (j.is_number_integer()) return {j.get<std::int64_t>(), 1};
  return parse_turns(j.get<std::string>());
}

}  // namespace

std::uint64_t RunConfig::require_seed(const std::string& why) const {
  if (!seed) throw ConfigError("a seed is required: " + why, "/seed");
  return *seed;
}

RunConfig load_config(const std::string& command, const json& doc) {
  RunConfig cfg;
  cfg.command = command;
  cfg.raw = doc;
  Arities n;
  if (doc.contains("n")) n = doc.at("n").get<Arities>();
  if (command == "suite" && n.empty()) n = {1};
  try {
    validate_arities(n);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), "/n");
  }
  if (doc.contains("k") && doc.at("k").get<std::size_t>() != n.size()) {
    throw ConfigError("k = " + std::to_string(doc.at("k").get<int>()) + " but n has " + std::to_string(n.size()) +
                          " entries",
                      "/k");
  }
  std::vector<LambdaEntry> raw;
  if (doc.contains("lambda")) {
    const auto& list = doc.at("lambda");
    for (std::size_t q = 0; q < list.size(); ++q) {
      const auto& e = list[q];
      try {
        raw.push_back({e.at("i").get<int>(), e.at("j").get<int>(), e.at("s").get<int>(), e.at("t").get<int>(),
                       parse_turn_value(e.at("turns"))});
      } catch (const ConfigError& err) {
        throw ConfigError(err.what(), "/lambda/" + std::to_string(q) + "/turns");
      }
    }
  }
  try {
    cfg.lambda = validate_lambda(n, raw);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), "/lambda" + e.pointer());
  }
  if (doc.contains("D")) cfg.degree = doc.at("D").get<int>();
  if (doc.contains("tol")) {
    const auto& t = doc.at("tol");
    if (t.contains("algebraic")) cfg.tol.algebraic = t.at("algebraic").get<double>();
    if (t.contains("eigen")) cfg.tol.eigen = t.at("eigen").get<double>();
  }
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
  return cfg;
}

Matrix parse_matrix(const json& j, const std::string& ptr) {
  if (j.is_object()) {
    const auto dim = j.at("dim").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != dim * dim) {
      throw ConfigError("expected " + std::to_string(dim * dim) + " entries", ptr + "/entries");
    }
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = parse_complex(entries[static_cast<std::size_t>(r * dim + c)]);
    }
    return m;
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("ragged matrix: row has " + std::to_string(row.size()) + " entries, expected " +
                            std::to_string(cols),
                        ptr + "/" + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

RowTuple parse_tuple(const RunConfig& cfg, const json& j, const std::string& ptr) {
  const auto& lambda = cfg.lambda;
  const int k = static_cast<int>(lambda.k());
  RowTuple t;
  const int forms = static_cast<int>(j.contains("builtin")) + static_cast<int>(j.contains("operators")) +
                    static_cast<int>(j.contains("random"));
  if (forms != 1) throw ConfigError("tuple needs exactly one of builtin, operators, random", ptr);
  if (j.contains("builtin")) {
    const auto kind = j.at("builtin").get<std::string>();
    if (kind == "torus") {
      if (lambda.n() != Arities{1, 1}) throw ConfigError("torus needs k = 2 and n = (1, 1)", ptr + "/builtin");
      const int nn = j.value("N", 4);
      t = RowTuple(lambda, {{clock_matrix(nn)}, {shift_matrix(nn)}});
    } else if (kind == "jordan") {
      if (lambda.n() != Arities{1}) throw ConfigError("jordan needs k = 1 and n = (1)", ptr + "/builtin");
      t = RowTuple(lambda, {{jordan_matrix(j.value("size", 2))}});
    } else if (kind == "zero") {
      t = RowTuple::zero(lambda, static_cast<std::size_t>(j.value("size", 1)));
    } else {
      const TruncatedModel model(lambda, j.value("degree", cfg.degree_or(2)));
      std::vector<std::vector<Matrix>> ops(lambda.k());
      for (int i = 1; i <= k; ++i) {
        for (int s = 1; s <= lambda.arity(i); ++s) ops[static_cast<std::size_t>(i - 1)].push_back(model.shift(i, s));
      }
      t = RowTuple(lambda, std::move(ops));
    }
  } else if (j.contains("random")) {
    const auto& r = j.at("random");
    MemberOptions opts;
    opts.max_dim = r.value("max_dim", opts.max_dim);
    opts.max_degree = r.value("max_degree", opts.max_degree);
    opts.max_aux = r.value("max_aux", opts.max_aux);
    Rng rng(cfg.require_seed("the tuple is sampled"));
    t = random_nilpotent_member(lambda, rng, opts);
  } else {
    const auto& ops = j.at("operators");
    std::vector<std::vector<Matrix>> mats(lambda.k());
    Eigen::Index dim = -1;
    for (int i = 1; i <= k; ++i) {
      for (int s = 1; s <= lambda.arity(i); ++s) {
        const std::string key = std::to_string(i) + ":" + std::to_string(s);
        const std::string p = ptr + "/operators/" + key;
        if (!ops.contains(key)) throw ConfigError("missing operator " + key, ptr + "/operators");
        Matrix m = parse_matrix(ops.at(key), p);
        if (m.rows() != m.cols()) throw ConfigError("operator must be square", p);
        if (dim >= 0 && m.rows() != dim) throw ConfigError("operator dimensions differ", p);
        dim = m.rows();
        mats[static_cast<std::size_t>(i - 1)].push_back(std::move(m));
      }
    }
    for (const auto& [key, value] : ops.items()) {
      int i = 0;
      int s = 0;
      char tail = 0;
      if (std::sscanf(key.c_str(), "%d:%d%c", &i, &s, &tail) != 2) {
        throw ConfigError("operator keys have the form \"i:s\"", ptr + "/operators/" + key);
      }
      if (i < 1 || i > k || s < 1 || s > lambda.arity(i)) {
        throw ConfigError("operator " + key + " is outside the model", ptr + "/operators/" + key);
      }
    }
    t = RowTuple(lambda, std::move(mats));
  }
  if (j.contains("scale")) t = t.scaled(j.at("scale").get<double>());
  return t;
}

StarPolynomial parse_polynomial(const PhaseMatrix& lambda, const json& j, const std::string& ptr) {
  StarPolynomial p(lambda.k());
  for (std::size_t q = 0; q < j.size(); ++q) {
    const auto& term = j[q];
    const std::string tp = ptr + "/" + std::to_string(q);
    std::pair<Phase, LetterWord> w;
    try {
      w = parse_word(term.at("word").get<std::string>(), lambda);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), tp + "/word");
    }
    const cplx c = term.contains("coeff") ? parse_complex(term.at("coeff")) : cplx(1.0);
    p += reduce_word(lambda, w.second).scaled(c * w.first.value());
  }
  return p;
}

TupleSpec parse_pieces(const PhaseMatrix& lambda, const json& j, const std::string& ptr) {
  TupleSpec spec;
  for (std::size_t q = 0; q < j.size(); ++q) {
    const auto& pj = j[q];
    const std::string pp = ptr + "/" + std::to_string(q);
    PieceSpec piece;
    piece.shifts = pj.at("A").get<std::vector<int>>();
    if (pj.contains("unitaries")) {
      for (const auto& [key, m] : pj.at("unitaries").items()) {
        int j = 0;
        char tail = 0;
        if (std::sscanf(key.c_str(), "%d%c", &j, &tail) != 1) {
          throw ConfigError("unitary keys are block numbers", pp + "/unitaries/" + key);
        }
        piece.unitaries.emplace(j, parse_matrix(m, pp + "/unitaries/" + key));
      }
    }
    if (pj.contains("wandering_dim")) {
      piece.wandering_dim = pj.at("wandering_dim").get<int>();
    } else if (!piece.unitaries.empty()) {
      piece.wandering_dim = static_cast<int>(piece.unitaries.begin()->second.rows());
    }
    spec.pieces.push_back(std::move(piece));
  }
  try {
    validate_spec(lambda, spec);
  } catch (const ConfigError& e) {
    // validate_spec points into {"pieces": ...}
    const std::string inner = e.pointer().rfind("/pieces", 0) == 0 ? e.pointer().substr(7) : e.pointer();
    throw ConfigError(e.what(), ptr + inner);
  }
  return spec;
}

Matrix parse_vectors(const TruncatedModel& model, std::size_t aux, const json& j, const std::string& ptr) {
  const auto rows = static_cast<Eigen::Index>(model.dim() * aux);
  Matrix out = Matrix::Zero(rows, static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const auto& v = j[c];
    const std::string vp = ptr + "/" + std::to_string(c);
    if (v.is_object()) {
      MultiWord w;
      try {
        w = parse_multiword(v.at("word").get<std::string>(), model.n());
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), vp + "/word");
      }
      const auto idx = model.index_of(w);
      if (!idx) throw ConfigError("word has degree above D = " + std::to_string(model.degree()), vp + "/word");
      const auto a = v.value("aux", std::size_t{0});
      if (a >= aux) throw ConfigError("aux index out of range", vp + "/aux");
      out(static_cast<Eigen::Index>(*idx * aux + a), static_cast<Eigen::Index>(c)) = 1.0;
    } else {
      if (static_cast<Eigen::Index>(v.size()) != rows) {
        throw ConfigError("vector has " + std::to_string(v.size()) + " coordinates, expected " + std::to_string(rows),
                          vp);
      }
      for (Eigen::Index r = 0; r < rows; ++r) out(r, static_cast<Eigen::Index>(c)) = parse_complex(v[static_cast<std::size_t>(r)]);
    }
  }
  return out;
}

}  // namespace lab
