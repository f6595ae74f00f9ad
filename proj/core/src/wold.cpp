#include "polyball/wold.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyball/errors.hpp"
#include "polyball/fockmodel.hpp"

namespace polyball {

namespace {

using Sparse = Eigen::SparseMatrix<cplx>;

std::string piece_ptr(std::size_t p, const std::string& field) {
  return "/pieces/" + std::to_string(p) + "/" + field;
}

bool contains(const std::vector<int>& a, int i) { return std::find(a.begin(), a.end(), i) != a.end(); }

std::uint32_t mask_of(const std::vector<int>& a) {
  std::uint32_t m = 0;
  for (int i : a) m |= 1u << (i - 1);
  return m;
}

Sparse sparse(const Matrix& m) { return m.sparseView(1.0, 1e-15); }

// Frobenius norm, an upper bound for the operator norm; cheap on sparse data.
double frob(const Sparse& m) { return m.norm(); }

Sparse select_columns(const Sparse& m, const std::vector<std::size_t>& cols) {
  Sparse sel(m.cols(), static_cast<Eigen::Index>(cols.size()));
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t j = 0; j < cols.size(); ++j) trip.emplace_back(static_cast<Eigen::Index>(cols[j]), static_cast<Eigen::Index>(j), 1.0);
  sel.setFromTriplets(trip.begin(), trip.end());
  return m * sel;
}

Sparse identity(Eigen::Index n) {
  Sparse id(n, n);
  id.setIdentity();
  return id;
}

struct SparseTuple {
  std::vector<std::vector<Sparse>> ops;

  explicit SparseTuple(const RowTuple& t) : ops(t.k()) {
    for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
      for (int s = 1; s <= t.lambda().arity(i); ++s) ops[static_cast<std::size_t>(i - 1)].push_back(sparse(t.op(i, s)));
    }
  }

  Sparse phi(int block, const Sparse& x) const {
    Sparse out(x.rows(), x.cols());
    for (const auto& v : ops[static_cast<std::size_t>(block - 1)]) out += Sparse(v * x * v.adjoint());
    out.prune(1.0, 1e-15);
    return out;
  }
};

bool eigen_multisets_match(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows()) return false;
  Eigen::ComplexEigenSolver<Matrix> ea(a, false), eb(b, false);
  std::vector<cplx> x(ea.eigenvalues().data(), ea.eigenvalues().data() + ea.eigenvalues().size());
  std::vector<cplx> y(eb.eigenvalues().data(), eb.eigenvalues().data() + eb.eigenvalues().size());
  std::vector<bool> used(y.size(), false);
  for (const auto& z : x) {
    std::size_t best = y.size();
    double dist = tol;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (!used[j] && std::abs(z - y[j]) <= dist) {
        dist = std::abs(z - y[j]);
        best = j;
      }
    }
    if (best == y.size()) return false;
    used[best] = true;
  }
  return true;
}

Matrix block_diagonal(const std::vector<Matrix>& parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.rows();
  Matrix out = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.block(off, off, p.rows(), p.cols()) = p;
    off += p.rows();
  }
  return out;
}

}  // namespace

void validate_spec(const PhaseMatrix& lambda, const TupleSpec& spec) {
  const int k = static_cast<int>(lambda.k());
  for (std::size_t p = 0; p < spec.pieces.size(); ++p) {
    const auto& piece = spec.pieces[p];
    for (std::size_t q = 0; q < piece.shifts.size(); ++q) {
      const int i = piece.shifts[q];
      if (i < 1 || i > k) throw ConfigError("block " + std::to_string(i) + " out of range", piece_ptr(p, "A/" + std::to_string(q)));
      if (q && piece.shifts[q - 1] >= i) throw ConfigError("A must be strictly increasing", piece_ptr(p, "A/" + std::to_string(q)));
    }
    if (piece.wandering_dim < 1) throw ConfigError("wandering dimension must be >= 1", piece_ptr(p, "wandering_dim"));
    for (const auto& [j, u] : piece.unitaries) {
      if (j < 1 || j > k || contains(piece.shifts, j)) {
        throw ConfigError("unitary given for block " + std::to_string(j) + ", which is not in the complement of A",
                          piece_ptr(p, "unitaries/" + std::to_string(j)));
      }
    }
    for (int j = 1; j <= k; ++j) {
      if (contains(piece.shifts, j)) continue;
      if (lambda.arity(j) != 1) {
        throw ConfigError("block " + std::to_string(j) + " lies outside A but n_" + std::to_string(j) + " = " +
                              std::to_string(lambda.arity(j)) +
                              "; a Cuntz row with n >= 2 has no finite-dimensional realization",
                          piece_ptr(p, "A"));
      }
      auto it = piece.unitaries.find(j);
      if (it == piece.unitaries.end()) {
        throw ConfigError("missing unitary for block " + std::to_string(j), piece_ptr(p, "unitaries"));
      }
      const Matrix& u = it->second;
      const auto ptr = piece_ptr(p, "unitaries/" + std::to_string(j));
      if (u.rows() != piece.wandering_dim || u.cols() != piece.wandering_dim) {
        throw ConfigError("unitary must be " + std::to_string(piece.wandering_dim) + "x" +
                              std::to_string(piece.wandering_dim),
                          ptr);
      }
      const auto w = static_cast<Eigen::Index>(piece.wandering_dim);
      if (linalg::spectral_norm(u.adjoint() * u - Matrix::Identity(w, w)) > 1e-12) {
        throw ConfigError("matrix for block " + std::to_string(j) + " is not unitary", ptr);
      }
    }
    for (const auto& [i, ui] : piece.unitaries) {
      for (const auto& [j, uj] : piece.unitaries) {
        if (j <= i) continue;
        const double res = linalg::spectral_norm(ui * uj - lambda.lambda(i, j, 1, 1).value() * uj * ui);
        if (res > 1e-12) {
          throw ConfigError("U_" + std::to_string(i) + " U_" + std::to_string(j) + " != lambda U_" +
                                std::to_string(j) + " U_" + std::to_string(i) + " (residual " +
                                std::to_string(res) + ")",
                            piece_ptr(p, "unitaries"));
        }
      }
    }
  }
}

std::vector<std::size_t> Assembly::interior(int m) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < index_degree.size(); ++j) {
    if (index_degree[j] <= degree - m) out.push_back(j);
  }
  return out;
}

Assembly assemble(const PhaseMatrix& lambda, const TupleSpec& spec, int degree) {
  validate_spec(lambda, spec);
  if (degree < 0) throw UsageError("assemble: degree must be >= 0");
  const int k = static_cast<int>(lambda.k());
  Assembly a;
  a.degree = degree;
  std::size_t total = 0;
  for (const auto& piece : spec.pieces) {
    PieceLayout lay;
    lay.mask = mask_of(piece.shifts);
    lay.offset = total;
    lay.wandering_dim = piece.wandering_dim;
    if (piece.shifts.empty()) {
      lay.basis.push_back(MultiWord::empty(lambda.k()));
    } else {
      Arities na;
      for (int i : piece.shifts) na.push_back(lambda.arity(i));
      for (const auto& w : enumerate_basis(na, degree)) {
        auto full = MultiWord::empty(lambda.k());
        for (std::size_t q = 0; q < piece.shifts.size(); ++q) {
          full.part(piece.shifts[q]).letters = w.parts[q].letters;
        }
        lay.basis.push_back(std::move(full));
      }
    }
    lay.dim = lay.basis.size() * static_cast<std::size_t>(piece.wandering_dim);
    total += lay.dim;
    for (const auto& w : lay.basis) {
      for (int c = 0; c < piece.wandering_dim; ++c) a.index_degree.push_back(w.total_degree());
    }
    a.pieces.push_back(std::move(lay));
  }

  const auto n = static_cast<Eigen::Index>(total);
  std::vector<std::vector<Matrix>> ops(lambda.k());
  for (int i = 1; i <= k; ++i) {
    for (int s = 1; s <= lambda.arity(i); ++s) ops[static_cast<std::size_t>(i - 1)].push_back(Matrix::Zero(n, n));
  }
  for (std::size_t p = 0; p < spec.pieces.size(); ++p) {
    const auto& piece = spec.pieces[p];
    const auto& lay = a.pieces[p];
    const auto w = static_cast<Eigen::Index>(piece.wandering_dim);
    std::map<MultiWord, std::size_t> index;
    for (std::size_t b = 0; b < lay.basis.size(); ++b) index.emplace(lay.basis[b], b);
    auto at = [&](std::size_t b) { return static_cast<Eigen::Index>(lay.offset) + static_cast<Eigen::Index>(b) * w; };
    for (int i = 1; i <= k; ++i) {
      for (int s = 1; s <= lambda.arity(i); ++s) {
        Matrix& m = ops[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(s - 1)];
        for (std::size_t b = 0; b < lay.basis.size(); ++b) {
          if (contains(piece.shifts, i)) {
            // shift blocks: the phases come only from A-blocks, other parts are empty
            const auto img = symbolic_apply(lambda, Letter::S(i, s), lay.basis[b]);
            auto it = index.find(img->word);
            if (it == index.end()) continue;
            m.block(at(it->second), at(b), w, w) = img->phase.value() * Matrix::Identity(w, w);
          } else {
            Phase ph;
            for (int l : piece.shifts) ph *= aggregate_phase(lambda, i, 1, lay.basis[b].part(l));
            m.block(at(b), at(b), w, w) = ph.value() * piece.unitaries.at(i);
          }
        }
      }
    }
  }
  a.tuple = RowTuple(lambda, std::move(ops));
  return a;
}

WoldProjections wold_projections(const Assembly& a, const Tolerances& tol) {
  const auto& t = a.tuple;
  const int k = static_cast<int>(t.k());
  const auto n = static_cast<Eigen::Index>(t.dim());
  const int d = a.degree;
  const SparseTuple v(t);
  const auto inner1 = a.interior(1);
  const auto inner2 = a.interior(2);

  // doubly commuting on the interior, else Wold theory does not apply
  double doubly = 0.0;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (i == j) continue;
      for (int s = 1; s <= t.lambda().arity(i); ++s) {
        for (int u = 1; u <= t.lambda().arity(j); ++u) {
          const auto& vi = v.ops[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(s - 1)];
          const auto& vj = v.ops[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(u - 1)];
          const Sparse r = Sparse(vi.adjoint() * vj) -
                           t.lambda().lambda(i, j, s, u).conj().value() * Sparse(vj * vi.adjoint());
          doubly = std::max(doubly, frob(select_columns(r, inner1)));
        }
      }
    }
  }
  if (doubly > tol.algebraic) {
    throw RejectionError("wold_projections: tuple is not doubly Lambda-commuting (residual " + std::to_string(doubly) + ")");
  }

  WoldProjections w;
  const Sparse id = identity(n);
  for (int i = 1; i <= k; ++i) {
    Sparse f = id;
    Sparse prev = id;
    for (int p = 1; p <= d; ++p) {
      prev = f;
      f = v.phi(i, f);
    }
    w.stabilization = std::max(w.stabilization, frob(select_columns(Sparse(f - prev), inner2)));
    w.cuntz_part.push_back(Matrix(f));
    w.shift_part.push_back(Matrix(id - f));
  }
  const std::uint32_t subsets = 1u << k;
  std::map<std::uint32_t, Sparse> ps;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    Sparse p = id;
    for (int i = 1; i <= k; ++i) {
      const auto& factor = (mask >> (i - 1)) & 1u ? w.shift_part[static_cast<std::size_t>(i - 1)]
                                                   : w.cuntz_part[static_cast<std::size_t>(i - 1)];
      p = Sparse(p * sparse(factor));
    }
    p.prune(1.0, 1e-15);
    ps.emplace(mask, p);
    w.subsets.emplace(mask, Matrix(p));
  }
  Sparse sum(n, n);
  for (const auto& [mask, p] : ps) {
    sum += p;
    w.idempotence = std::max(w.idempotence, frob(select_columns(Sparse(p * p - p), inner1)));
    for (const auto& [other, q] : ps) {
      if (other <= mask) continue;
      w.orthogonality = std::max(w.orthogonality, frob(select_columns(Sparse(p * q), inner1)));
    }
    for (const auto& row : v.ops) {
      for (const auto& op : row) {
        w.commutation = std::max(w.commutation, frob(select_columns(Sparse(p * op - op * p), inner2)));
        const Sparse adj = op.adjoint();
        w.commutation = std::max(w.commutation, frob(select_columns(Sparse(p * adj - adj * p), inner2)));
      }
    }
  }
  w.completeness = frob(select_columns(Sparse(sum - id), inner1));
  w.pass = w.stabilization <= tol.algebraic && w.idempotence <= tol.algebraic &&
           w.orthogonality <= tol.algebraic && w.completeness <= tol.algebraic && w.commutation <= tol.algebraic;
  return w;
}

WanderingData wandering_data(const Assembly& a, const Tolerances& tol) {
  const auto proj = wold_projections(a, tol);
  const auto& t = a.tuple;
  const int k = static_cast<int>(t.k());
  const auto n = static_cast<Eigen::Index>(t.dim());
  const auto inner = a.interior(1);
  Matrix embed = Matrix::Zero(n, static_cast<Eigen::Index>(inner.size()));
  for (std::size_t j = 0; j < inner.size(); ++j) embed(static_cast<Eigen::Index>(inner[j]), static_cast<Eigen::Index>(j)) = 1.0;

  WanderingData out;
  out.k = t.k();
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    Matrix x = embed;
    for (int i = 1; i <= k; ++i) {
      if ((mask >> (i - 1)) & 1u) {
        x = x - phi_map(t, i, Matrix::Identity(n, n)) * x;
      }
    }
    for (int j = 1; j <= k; ++j) {
      if (!((mask >> (j - 1)) & 1u)) x = proj.cuntz_part[static_cast<std::size_t>(j - 1)] * x;
    }
    WanderingBlock blk;
    blk.basis = linalg::orthonormal_range(x);
    blk.dim = static_cast<int>(blk.basis.cols());
    const Matrix& q = blk.basis;
    for (int j = 1; j <= k; ++j) {
      if ((mask >> (j - 1)) & 1u) {
        for (int s = 1; s <= t.lambda().arity(j); ++s) {
          blk.kernel = std::max(blk.kernel, linalg::spectral_norm(t.op(j, s).adjoint() * q));
        }
      } else if (t.lambda().arity(j) == 1 && blk.dim > 0) {
        const Matrix vq = t.op(j, 1) * q;
        const Matrix u = q.adjoint() * vq;
        blk.invariance = std::max(blk.invariance, linalg::spectral_norm(vq - q * u));
        blk.unitarity = std::max(blk.unitarity,
                                 linalg::spectral_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())));
        blk.unitaries.emplace(j, u);
      }
    }
    out.blocks.emplace(mask, std::move(blk));
  }
  return out;
}

WanderingData planted_data(const PhaseMatrix& lambda, const TupleSpec& spec) {
  validate_spec(lambda, spec);
  const int k = static_cast<int>(lambda.k());
  WanderingData out;
  out.k = lambda.k();
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    WanderingBlock blk;
    std::map<int, std::vector<Matrix>> parts;
    for (const auto& piece : spec.pieces) {
      if (mask_of(piece.shifts) != mask) continue;
      blk.dim += piece.wandering_dim;
      for (const auto& [j, u] : piece.unitaries) parts[j].push_back(u);
    }
    for (const auto& [j, list] : parts) blk.unitaries.emplace(j, block_diagonal(list));
    out.blocks.emplace(mask, std::move(blk));
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::NotEquivalent: return "not_equivalent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

EquivalenceReport equivalence_check(const WanderingData& a, const WanderingData& b, double tol) {
  if (a.k != b.k) throw UsageError("equivalence_check: block counts differ");
  EquivalenceReport rep;
  for (std::uint32_t mask = 0; mask < (1u << a.k); ++mask) {
    const auto ia = a.blocks.find(mask);
    const auto ib = b.blocks.find(mask);
    const int da = ia == a.blocks.end() ? 0 : ia->second.dim;
    const int db = ib == b.blocks.end() ? 0 : ib->second.dim;
    Verdict v = Verdict::Equivalent;
    if (da != db) {
      v = Verdict::NotEquivalent;
    } else if (da > 0) {
      const auto& ua = ia->second.unitaries;
      const auto& ub = ib->second.unitaries;
      std::vector<Matrix> ga, gb;
      bool same_keys = ua.size() == ub.size();
      for (const auto& [j, u] : ua) {
        auto it = ub.find(j);
        if (it == ub.end()) {
          same_keys = false;
          break;
        }
        ga.push_back(u);
        gb.push_back(it->second);
      }
      if (!same_keys) {
        v = Verdict::NotEquivalent;
      } else if (ga.size() == 1) {
        v = eigen_multisets_match(ga[0], gb[0], tol) ? Verdict::Equivalent : Verdict::NotEquivalent;
      } else if (ga.size() > 1) {
        v = fingerprints_match(trace_fingerprint(ga, 4), trace_fingerprint(gb, 4), tol) ? Verdict::Inconclusive
                                                                                         : Verdict::NotEquivalent;
      }
    }
    rep.per_subset.emplace(mask, v);
    if (v == Verdict::NotEquivalent) {
      rep.verdict = Verdict::NotEquivalent;
    } else if (v == Verdict::Inconclusive && rep.verdict == Verdict::Equivalent) {
      rep.verdict = Verdict::Inconclusive;
    }
  }
  return rep;
}

nlohmann::json WanderingData::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [mask, blk] : blocks) {
    std::vector<int> a;
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1u) a.push_back(static_cast<int>(i + 1));
    }
    nlohmann::json u = nlohmann::json::object();
    for (const auto& [j, m] : blk.unitaries) u[std::to_string(j)] = matrix_to_json(m);
    out.push_back({{"A", a},
                   {"dim", blk.dim},
                   {"unitaries", u},
                   {"invariance_residual", blk.invariance},
                   {"unitarity_residual", blk.unitarity},
                   {"kernel_residual", blk.kernel}});
  }
  return out;
}

nlohmann::json spec_to_json(const TupleSpec& spec) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : spec.pieces) {
    nlohmann::json j{{"A", p.shifts}, {"wandering_dim", p.wandering_dim}};
    if (!p.unitaries.empty()) {
      nlohmann::json u = nlohmann::json::object();
      for (const auto& [b, m] : p.unitaries) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
          nlohmann::json row = nlohmann::json::array();
          for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
          rows.push_back(row);
        }
        u[std::to_string(b)] = rows;
      }
      j["unitaries"] = u;
    }
    pieces.push_back(j);
  }
  return {{"pieces", pieces}};
}

RandomSpec random_spec(Rng& rng, int max_wandering, std::size_t max_total) {
  static constexpr int kModuli[] = {2, 3, 4, 6};
  RandomSpec out;
  const int k = rng.integer(1, 3);
  const int nmod = kModuli[rng.integer(0, 3)];
  out.modulus = nmod;
  Arities n(static_cast<std::size_t>(k));
  for (auto& a : n) a = rng.uniform() < 0.6 ? 1 : 2;
  std::vector<int> wa(static_cast<std::size_t>(k)), wb(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    wa[static_cast<std::size_t>(i)] = rng.integer(0, nmod - 1);
    wb[static_cast<std::size_t>(i)] = rng.integer(0, nmod - 1);
  }
  std::vector<LambdaEntry> raw;
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) {
      for (int s = 1; s <= n[static_cast<std::size_t>(i - 1)]; ++s) {
        for (int t = 1; t <= n[static_cast<std::size_t>(j - 1)]; ++t) {
          std::int64_t turns;
          if (n[static_cast<std::size_t>(i - 1)] == 1 && n[static_cast<std::size_t>(j - 1)] == 1) {
            const auto ii = static_cast<std::size_t>(i - 1);
            const auto jj = static_cast<std::size_t>(j - 1);
            turns = ((wa[ii] * wb[jj] - wa[jj] * wb[ii]) % nmod + nmod) % nmod;
          } else {
            turns = rng.integer(0, nmod - 1);
          }
          raw.push_back({i, j, s, t, {turns, nmod}});
        }
      }
    }
  }
  out.lambda = validate_lambda(n, raw);

  out.degree = rng.integer(2, 4);
  // keep the largest possible shift piece inside the budget
  while (out.degree > 2 && basis_size(n, out.degree) > max_total / 2) --out.degree;

  const int count = rng.integer(1, 3);
  std::size_t used = 0;
  for (int p = 0; p < count; ++p) {
    PieceSpec piece;
    for (int i = 1; i <= k; ++i) {
      if (n[static_cast<std::size_t>(i - 1)] > 1 || rng.coin()) piece.shifts.push_back(i);
    }
    std::vector<int> rest;
    for (int i = 1; i <= k; ++i) {
      if (!contains(piece.shifts, i)) rest.push_back(i);
    }
    std::size_t cells = 1;
    if (!piece.shifts.empty()) {
      Arities na;
      for (int i : piece.shifts) na.push_back(n[static_cast<std::size_t>(i - 1)]);
      cells = basis_size(na, out.degree);
    }
    const std::size_t budget = max_total > used ? max_total - used : 0;
    if (rest.size() >= 2) {
      // Weyl pair of order N tensored with a commuting diagonal multiplicity space
      const int cap = std::min<int>(max_wandering / nmod, static_cast<int>(budget / (cells * static_cast<std::size_t>(nmod))));
      if (cap < 1) continue;
      const int mult = rng.integer(1, cap);
      piece.wandering_dim = nmod * mult;
      const Matrix mix = rng.unitary(piece.wandering_dim);
      for (int j : rest) {
        const auto jj = static_cast<std::size_t>(j - 1);
        Matrix weyl = Matrix::Identity(nmod, nmod);
        const Matrix c = clock_matrix(nmod, wa[jj]);
        for (int q = 0; q < wb[jj]; ++q) weyl = weyl * shift_matrix(nmod);
        weyl = c * weyl;
        Matrix diag = Matrix::Zero(mult, mult);
        for (int q = 0; q < mult; ++q) diag(q, q) = Phase(rng.integer(0, nmod - 1), nmod).value();
        piece.unitaries.emplace(j, mix * linalg::kron(weyl, diag) * mix.adjoint());
      }
    } else {
      const int cap = std::min<int>(max_wandering, static_cast<int>(budget / cells));
      if (cap < 1) continue;
      piece.wandering_dim = rng.integer(1, cap);
      if (!rest.empty()) {
        const Matrix mix = rng.unitary(piece.wandering_dim);
        Matrix diag = Matrix::Zero(piece.wandering_dim, piece.wandering_dim);
        for (int q = 0; q < piece.wandering_dim; ++q) diag(q, q) = Phase(rng.integer(0, nmod - 1), nmod).value();
        piece.unitaries.emplace(rest.front(), mix * diag * mix.adjoint());
      }
    }
    used += cells * static_cast<std::size_t>(piece.wandering_dim);
    out.spec.pieces.push_back(std::move(piece));
  }
  if (out.spec.pieces.empty()) {
    // every draw overflowed the budget: fall back to a single shift piece
    PieceSpec piece;
    for (int i = 1; i <= k; ++i) piece.shifts.push_back(i);
    out.spec.pieces.push_back(piece);
  }
  return out;
}

}  // namespace polyball
