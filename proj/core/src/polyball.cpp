#include "polyball/polyball.hpp"

#include <algorithm>
#include <cmath>

#include "polyball/errors.hpp"
#include "polyball/fockmodel.hpp"

namespace polyball {

RowTuple::RowTuple(PhaseMatrix lambda, std::vector<std::vector<Matrix>> ops)
    : lambda_(std::move(lambda)), ops_(std::move(ops)) {
  if (ops_.size() != lambda_.k()) throw UsageError("RowTuple: expected one row per block");
  bool first = true;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (static_cast<int>(ops_[i].size()) != lambda_.arity(static_cast<int>(i + 1))) {
      throw UsageError("RowTuple: row " + std::to_string(i + 1) + " has the wrong number of entries");
    }
    for (const auto& m : ops_[i]) {
      if (m.rows() != m.cols()) throw UsageError("RowTuple: operators must be square");
      if (first) {
        dim_ = static_cast<std::size_t>(m.rows());
        first = false;
      } else if (static_cast<std::size_t>(m.rows()) != dim_) {
        throw UsageError("RowTuple: operators must share one dimension");
      }
    }
  }
}

RowTuple RowTuple::zero(PhaseMatrix lambda, std::size_t dim) {
  std::vector<std::vector<Matrix>> ops(lambda.k());
  const auto n = static_cast<Eigen::Index>(dim);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    ops[i].assign(static_cast<std::size_t>(lambda.arity(static_cast<int>(i + 1))), Matrix::Zero(n, n));
  }
  return RowTuple(std::move(lambda), std::move(ops));
}

const Matrix& RowTuple::op(int block, int letter) const {
  return ops_.at(static_cast<std::size_t>(block - 1)).at(static_cast<std::size_t>(letter - 1));
}

Matrix& RowTuple::op(int block, int letter) {
  return ops_.at(static_cast<std::size_t>(block - 1)).at(static_cast<std::size_t>(letter - 1));
}

RowTuple RowTuple::scaled(double r) const {
  auto out = *this;
  for (auto& row : out.ops_) {
    for (auto& m : row) m *= r;
  }
  return out;
}

RowTuple RowTuple::compressed(const Matrix& u) const {
  if (static_cast<std::size_t>(u.rows()) != dim_) throw UsageError("RowTuple::compressed: dimension mismatch");
  auto out = *this;
  for (auto& row : out.ops_) {
    for (auto& m : row) m = u.adjoint() * m * u;
  }
  out.dim_ = static_cast<std::size_t>(u.cols());
  return out;
}

Matrix RowTuple::word(const LetterWord& w) const {
  validate_letters(w, lambda_);
  return evaluate_word(w, dim_, [&](int i, int s) -> const Matrix& { return op(i, s); });
}

Matrix RowTuple::evaluate(const StarPolynomial& p) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [key, c] : p.terms()) out += c.value() * word(monomial_letters(key));
  return out;
}

Matrix phi_map(const RowTuple& t, int block, const Matrix& x, double r) {
  if (static_cast<std::size_t>(x.rows()) != t.dim() || x.rows() != x.cols()) {
    throw UsageError("phi_map: dimension mismatch");
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (int s = 1; s <= t.lambda().arity(block); ++s) {
    const auto& a = t.op(block, s);
    out.noalias() += a * x * a.adjoint();
  }
  return r * r * out;
}

Matrix phi_power(const RowTuple& t, int block, const Matrix& x, int q) {
  Matrix out = x;
  for (int p = 0; p < q; ++p) out = phi_map(t, block, out);
  return out;
}

Matrix mixed_defect(const RowTuple& t, std::uint32_t mask, double r) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  Matrix out = Matrix::Identity(n, n);
  for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
    if (mask & (1u << (i - 1))) out = out - phi_map(t, i, out, r);
  }
  return out;
}

Matrix defect(const RowTuple& t, double r) {
  return mixed_defect(t, (1u << t.k()) - 1u, r);
}

double commutation_residual(const RowTuple& t) {
  double worst = 0.0;
  const auto& l = t.lambda();
  for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
    for (int j = i + 1; j <= static_cast<int>(t.k()); ++j) {
      for (int s = 1; s <= l.arity(i); ++s) {
        for (int u = 1; u <= l.arity(j); ++u) {
          const Matrix d = t.op(i, s) * t.op(j, u) - l.lambda(i, j, s, u).value() * t.op(j, u) * t.op(i, s);
          worst = std::max(worst, linalg::spectral_norm(d));
        }
      }
    }
  }
  return worst;
}

double doubly_residual(const RowTuple& t) {
  double worst = 0.0;
  const auto& l = t.lambda();
  for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
    for (int j = 1; j <= static_cast<int>(t.k()); ++j) {
      if (i == j) continue;
      for (int s = 1; s <= l.arity(i); ++s) {
        for (int u = 1; u <= l.arity(j); ++u) {
          const Matrix d = t.op(i, s).adjoint() * t.op(j, u) -
                           l.lambda(i, j, s, u).conj().value() * t.op(j, u) * t.op(i, s).adjoint();
          worst = std::max(worst, linalg::spectral_norm(d));
        }
      }
    }
  }
  return worst;
}

DoublyReport check_doubly(const RowTuple& t, const Tolerances& tol) {
  DoublyReport r;
  r.residual = doubly_residual(t);
  r.is_doubly = r.residual <= tol.algebraic;
  return r;
}

PurityReport check_pure(const RowTuple& t, const Tolerances& tol, int max_power) {
  if (max_power < 1) throw UsageError("check_pure: max_power must be >= 1");
  PurityReport rep;
  rep.is_pure = true;
  const auto n = static_cast<Eigen::Index>(t.dim());
  for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
    Matrix x = Matrix::Identity(n, n);
    std::optional<int> order;
    if (n == 0) order = 0;
    // a nilpotent row has index at most dim, so orders are only sought up to there
    for (int q = 1; q <= max_power && !order; ++q) {
      x = phi_map(t, i, x);
      if (q <= n && x.cwiseAbs().maxCoeff() <= tol.algebraic) order = q;
    }
    const double tail = order ? 0.0 : linalg::spectral_norm(x);
    rep.tail.push_back(tail);
    rep.nilpotency.push_back(order);
    rep.is_pure = rep.is_pure && tail <= tol.algebraic;
  }
  return rep;
}

std::optional<int> joint_nilpotency(const RowTuple& t, double tol, int max_degree) {
  const auto k = static_cast<int>(t.k());
  const auto n = static_cast<Eigen::Index>(t.dim());
  if (n == 0) return 0;
  // Lambda-commuting products reorder to normal order, so vanishing in every
  // degree q means a nilpotent algebra, whose index is at most dim.
  max_degree = std::min(max_degree, static_cast<int>(n) + 1);
  // prev[j] = sum over p_j+...+p_k = q-1 of Phi_j^{p_j}...Phi_k^{p_k}(I)
  std::vector<Matrix> prev(static_cast<std::size_t>(k + 1), Matrix::Identity(n, n));
  for (int q = 1; q <= max_degree; ++q) {
    std::vector<Matrix> cur(static_cast<std::size_t>(k + 1), Matrix::Zero(n, n));
    for (int j = k - 1; j >= 0; --j) {
      cur[static_cast<std::size_t>(j)] =
          cur[static_cast<std::size_t>(j + 1)] + phi_map(t, j + 1, prev[static_cast<std::size_t>(j)]);
    }
    // the total is positive, so its trace bounds its norm
    if (std::abs(cur[0].trace()) <= tol) return q - 1;
    prev = std::move(cur);
  }
  return std::nullopt;
}

MembershipReport check_membership(const RowTuple& t, const Tolerances& tol) {
  MembershipReport rep;
  rep.is_row_contraction = true;
  const auto n = static_cast<Eigen::Index>(t.dim());
  for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
    const double norm = linalg::max_eigenvalue(phi_map(t, i, Matrix::Identity(n, n)));
    rep.row_norms.push_back(norm);
    rep.is_row_contraction = rep.is_row_contraction && norm <= 1.0 + tol.eigen;
  }
  rep.commutation_residual = commutation_residual(t);
  rep.is_lambda_commuting = rep.commutation_residual <= tol.algebraic;
  rep.doubly = check_doubly(t, tol);

  bool positive = true;
  const std::uint32_t subsets = 1u << t.k();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const double ev = linalg::min_eigenvalue(mixed_defect(t, mask));
    const bool pass = ev >= -tol.eigen;
    rep.positivity.push_back({mask, ev, pass});
    positive = positive && pass;
  }
  bool grid_ok = true;
  for (int g = 1; g <= 9; ++g) {
    const double r = 0.1 * g;
    const double ev = linalg::min_eigenvalue(defect(t, r));
    rep.r_grid.push_back({r, ev});
    grid_ok = grid_ok && ev >= -tol.eigen;
  }
  rep.is_member = rep.is_lambda_commuting && rep.is_row_contraction && positive;
  rep.grid_discrepancy = rep.is_member && !grid_ok;
  rep.purity = check_pure(t, tol);
  return rep;
}

nlohmann::json MembershipReport::to_json() const {
  nlohmann::json j;
  j["is_member"] = is_member;
  j["is_pure"] = purity.is_pure;
  j["is_lambda_commuting"] = is_lambda_commuting;
  j["commutation_residual"] = commutation_residual;
  j["is_doubly"] = doubly.is_doubly;
  j["doubly_residual"] = doubly.residual;
  j["is_row_contraction"] = is_row_contraction;
  j["row_norms"] = row_norms;
  auto& pos = j["positivity"] = nlohmann::json::array();
  for (const auto& s : positivity) {
    std::vector<int> p;
    for (std::size_t i = 0; i < row_norms.size(); ++i) p.push_back((s.mask >> i) & 1u ? 1 : 0);
    pos.push_back({{"p", p}, {"min_eigenvalue", s.min_eigenvalue}, {"pass", s.pass}});
  }
  auto& grid = j["r_grid"] = nlohmann::json::array();
  for (const auto& g : r_grid) grid.push_back({{"r", g.r}, {"min_eigenvalue", g.min_eigenvalue}});
  j["grid_discrepancy"] = grid_discrepancy;
  j["purity_tail"] = purity.tail;
  auto& nil = j["nilpotency"] = nlohmann::json::array();
  for (const auto& o : purity.nilpotency) nil.push_back(o ? nlohmann::json(*o) : nlohmann::json());
  return j;
}

std::vector<cplx> trace_fingerprint(const std::vector<Matrix>& gens, int max_len) {
  std::vector<cplx> out;
  if (gens.empty()) return out;
  const auto n = gens.front().rows();
  if (n == 0) return out;
  std::vector<Matrix> letters;
  for (const auto& g : gens) {
    letters.push_back(g);
    letters.push_back(g.adjoint());
  }
  std::vector<Matrix> level{Matrix::Identity(n, n)};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Matrix> next;
    next.reserve(level.size() * letters.size());
    for (const auto& w : level) {
      for (const auto& l : letters) {
        next.push_back(w * l);
        out.push_back(next.back().trace() / static_cast<double>(n));
      }
    }
    level = std::move(next);
  }
  return out;
}

bool fingerprints_match(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

Matrix clock_matrix(int n, int power) {
  Matrix c = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const auto turns = (static_cast<std::int64_t>(power) * m) % n;
    c(m, m) = Phase((turns + n) % n, n).value();
  }
  return c;
}

Matrix shift_matrix(int n) {
  Matrix x = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m) x((m + 1) % n, m) = 1.0;
  return x;
}

Matrix jordan_matrix(int d) {
  Matrix j = Matrix::Zero(d, d);
  for (int m = 0; m + 1 < d; ++m) j(m, m + 1) = 1.0;
  return j;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  }
  if (m.rows() == m.cols()) return {{"dim", m.rows()}, {"entries", entries}};
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

}  // namespace polyball
