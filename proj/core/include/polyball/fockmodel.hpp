#pragma once

// The standard model on l2(F+_{n_1} x ... x F+_{n_k}).
//
// S_{i,s} chi_(a1,...,ak) = lambda_{i,1}(s,a1)...lambda_{i,i-1}(s,a_{i-1}) chi_(a1,...,g_s a_i,...,ak)
//
// The symbolic action is exact and untruncated. Matrices are compressions to
// the multi-words of total degree <= D; an identity that uses m creation
// letters is only asserted on basis vectors of degree <= D - m (the interior).

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyball/linalg.hpp"
#include "polyball/mwords.hpp"
#include "polyball/phases.hpp"
#include "polyball/rewrite.hpp"

namespace polyball {

struct SymbolicImage {
  Phase phase;
  MultiWord word;
};

std::optional<SymbolicImage> symbolic_apply(const PhaseMatrix& lambda, const Letter& letter,
                                            const MultiWord& chi);
// Letters act right to left, as in an operator product.
std::optional<SymbolicImage> symbolic_apply(const PhaseMatrix& lambda, const LetterWord& word,
                                            const MultiWord& chi);

using SymbolicVector = std::map<MultiWord, cplx>;
SymbolicVector symbolic_evaluate(const PhaseMatrix& lambda, const StarPolynomial& p, const MultiWord& chi);

// Sparse operator with at most one nonzero phase per column: the exact form
// of every monomial in the truncated shifts.
class MonomialOperator {
public:
  using Entry = std::optional<std::pair<std::size_t, Phase>>;

  explicit MonomialOperator(std::vector<Entry> cols) : cols_(std::move(cols)) {}
  static MonomialOperator identity(std::size_t dim);

  std::size_t dim() const noexcept { return cols_.size(); }
  const Entry& column(std::size_t j) const { return cols_.at(j); }

  // this * other
  MonomialOperator compose(const MonomialOperator& other) const;
  MonomialOperator adjoint() const;
  MonomialOperator times(const Phase& p) const;
  Matrix dense() const;

private:
  std::vector<Entry> cols_;
};

class TruncatedModel {
public:
  TruncatedModel(PhaseMatrix lambda, int max_degree);

  const PhaseMatrix& lambda() const noexcept { return lambda_; }
  std::size_t k() const noexcept { return lambda_.k(); }
  const Arities& n() const noexcept { return lambda_.n(); }
  int degree() const noexcept { return degree_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<MultiWord>& basis() const noexcept { return basis_; }

  std::optional<std::size_t> index_of(const MultiWord& w) const;
  std::size_t vacuum() const noexcept { return 0; }

  // Basis indices of total degree <= D - m (empty when m > D).
  std::vector<std::size_t> interior(int creator_degree) const;

  const MonomialOperator& letter_operator(const Letter& l) const;
  const Matrix& letter_matrix(const Letter& l) const;
  // S_{i,s}
  const Matrix& shift(int block, int letter) const { return letter_matrix(Letter::S(block, letter)); }

private:
  std::size_t slot(const Letter& l) const;

  PhaseMatrix lambda_;
  int degree_;
  std::vector<MultiWord> basis_;
  std::map<MultiWord, std::size_t> index_;
  std::vector<MonomialOperator> ops_;  // creators then adjoints, per global letter
  mutable std::vector<std::optional<Matrix>> mats_;  // dense forms, built on demand
};

struct OperatorMatrix {
  Matrix matrix;
  std::string provenance;
  int creator_degree = 0;
};

// Compression of p({S},{S*}) to degree <= D, evaluated term by term.
OperatorMatrix build_matrix(const TruncatedModel& model, const StarPolynomial& p);
// Product of the per-letter compressed matrices (composed exactly).
OperatorMatrix word_matrix(const TruncatedModel& model, const LetterWord& word);

// prod_{i in subset} (I - r^2 sum_s S_{i,s} S_{i,s}^*), subset 1-based.
OperatorMatrix defect_operator(const TruncatedModel& model, double r, std::span<const int> subset);

using CoefficientMap = std::map<MultiWord, cplx>;

// q_m(S) P_C p_m(S)^*, where p_m, q_m keep coefficients of degree <= m.
OperatorMatrix rank_one_approx(const TruncatedModel& model, const CoefficientMap& p, const CoefficientMap& q,
                               int m);

// Operator norm of (a - b) restricted to interior columns of degree <= D - m.
double interior_residual(const Matrix& a, const Matrix& b, const TruncatedModel& model, int m);

// Operators on the model tensored with an auxiliary C^aux. Row index of
// chi_w (x) e_c is index(w) * aux + c.
//
// (op (x) I_aux) x, exact and sparse.
Matrix apply_tensor(const MonomialOperator& op, const Matrix& x, std::size_t aux);
// (a (x) I_aux) x for a dense model operator a.
Matrix apply_kron(const Matrix& a, const Matrix& x, std::size_t aux);
// Ambient indices of the basis vectors of degree <= max_degree.
std::vector<std::size_t> tensor_interior(const TruncatedModel& model, std::size_t aux, int max_degree);
// Largest total degree among the rows where some column of x is nonzero (-1 if x = 0).
int support_degree(const TruncatedModel& model, const Matrix& x, std::size_t aux, double tol = 1e-12);

// Orthonormal basis of span{(S_alpha (x) I) q : |alpha| <= steps}, grown one
// letter at a time. Exact while degree(q) + steps <= D.
Matrix generated_span(const TruncatedModel& model, const Matrix& q, std::size_t aux, int steps);
// Largest m such that chi_gamma (x) l lies in span for every |gamma| <= m
// (-1 if not even the vacuum layer does). `span` and `l` have orthonormal columns.
int contained_degree(const TruncatedModel& model, const Matrix& span, const Matrix& l, std::size_t aux,
                     double tol = 1e-9);

// Letter-word evaluation on arbitrary generators: gens(letter) must return the
// matrix of the (unstarred) letter; starred letters use its adjoint.
template <class Gen>
Matrix evaluate_word(const LetterWord& word, std::size_t dim, Gen&& gens) {
  Matrix out = Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& l : word) {
    const Matrix& g = gens(l.block, l.index);
    if (l.starred) {
      out = out * g.adjoint();
    } else {
      out = out * g;
    }
  }
  return out;
}

}  // namespace polyball
