#pragma once

// Concrete tuples T = (T_1,...,T_k) of row operators T_i = [T_{i,1} ... T_{i,n_i}]
// on C^dim, and the regular Lambda-polyball tests:
//   Phi_{rT_i}(X) = r^2 sum_s T_{i,s} X T_{i,s}^*
//   Delta^{(p)}  = prod_{i : p_i = 1} (id - Phi_{T_i}) (I),  p in {0,1}^k

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyball/linalg.hpp"
#include "polyball/phases.hpp"
#include "polyball/rewrite.hpp"

namespace polyball {

class RowTuple {
public:
  RowTuple() = default;
  // ops[i-1][s-1] = T_{i,s}; throws UsageError on shape mismatch.
  RowTuple(PhaseMatrix lambda, std::vector<std::vector<Matrix>> ops);
  static RowTuple zero(PhaseMatrix lambda, std::size_t dim);

  const PhaseMatrix& lambda() const noexcept { return lambda_; }
  std::size_t k() const noexcept { return lambda_.k(); }
  std::size_t dim() const noexcept { return dim_; }
  const Matrix& op(int block, int letter) const;
  Matrix& op(int block, int letter);

  RowTuple scaled(double r) const;
  // U^* T U for an isometry U : C^m -> C^dim (compression onto range U).
  RowTuple compressed(const Matrix& u) const;
  // Product of generators (starred letters use adjoints).
  Matrix word(const LetterWord& w) const;
  // p({T}, {T^*}) evaluated directly.
  Matrix evaluate(const StarPolynomial& p) const;

private:
  PhaseMatrix lambda_;
  std::size_t dim_ = 0;
  std::vector<std::vector<Matrix>> ops_;
};

struct Tolerances {
  double algebraic = 1e-10;
  double eigen = 1e-9;
};

Matrix phi_map(const RowTuple& t, int block, const Matrix& x, double r = 1.0);
// Phi_{T_i}^q(x).
Matrix phi_power(const RowTuple& t, int block, const Matrix& x, int q);
// prod over i in mask of (id - Phi_{rT_i}) applied to I; bit i-1 selects block i.
Matrix mixed_defect(const RowTuple& t, std::uint32_t mask, double r = 1.0);
// Delta_T(I): the fully mixed defect.
Matrix defect(const RowTuple& t, double r = 1.0);

// max ||T_{i,s} T_{j,t} - lambda_{i,j}(s,t) T_{j,t} T_{i,s}|| over i < j.
double commutation_residual(const RowTuple& t);
// max ||T_{i,s}^* T_{j,t} - conj(lambda_{i,j}(s,t)) T_{j,t} T_{i,s}^*|| over i != j.
double doubly_residual(const RowTuple& t);

struct DoublyReport {
  bool is_doubly = false;
  double residual = 0.0;
};
DoublyReport check_doubly(const RowTuple& t, const Tolerances& tol = {});

struct PurityReport {
  bool is_pure = false;
  std::vector<double> tail;                  // ||Phi_{T_i}^P(I)|| per block
  std::vector<std::optional<int>> nilpotency;  // first q with Phi_{T_i}^q(I) numerically 0
};
PurityReport check_pure(const RowTuple& t, const Tolerances& tol = {}, int max_power = 64);

// Smallest d with T_{1,b1}...T_{k,bk} = 0 whenever |b1|+...+|bk| > d, if that
// happens for some d < max_degree.
std::optional<int> joint_nilpotency(const RowTuple& t, double tol = 1e-10, int max_degree = 64);

struct MembershipReport {
  struct Subset {
    std::uint32_t mask;
    double min_eigenvalue;
    bool pass;
  };
  struct GridPoint {
    double r;
    double min_eigenvalue;
  };

  std::vector<double> row_norms;  // ||sum_s T_{i,s} T_{i,s}^*||
  bool is_row_contraction = false;
  bool is_lambda_commuting = false;
  double commutation_residual = 0.0;
  DoublyReport doubly;
  std::vector<Subset> positivity;
  std::vector<GridPoint> r_grid;
  // Condition (iii) passed but the r-grid saw a negative defect.
  bool grid_discrepancy = false;
  bool is_member = false;
  PurityReport purity;

  nlohmann::json to_json() const;
};
MembershipReport check_membership(const RowTuple& t, const Tolerances& tol = {});

// tr(w(G, G^*)) for every word w of length 1..max_len in the generators and
// their adjoints, normalized by dimension; a unitary-invariant fingerprint.
std::vector<cplx> trace_fingerprint(const std::vector<Matrix>& gens, int max_len);
bool fingerprints_match(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol);

// Clock C = diag(w^{a m}) and shift X e_m = e_{m+1} of order N, w = e^{2 pi i/N}.
Matrix clock_matrix(int n, int power = 1);
Matrix shift_matrix(int n);
// Jordan block of size d with e_{m+1} -> e_m.
Matrix jordan_matrix(int d);

// {"dim":N,"entries":[[re,im],...]}, row-major.
nlohmann::json matrix_to_json(const Matrix& m);

}  // namespace polyball
