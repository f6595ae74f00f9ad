#pragma once

// Noncommutative Berezin kernel of a pure tuple and what it buys:
//
//   K_T h = sum_beta chi_beta (x) Delta_T(I)^{1/2} (T_{1,b1} ... T_{k,bk})^* h
//
// K_T is an isometry with K_T T_{i,s}^* = (S_{i,s}^* (x) I) K_T, so S (x) I on
// the model tensor D_T is the minimal isometric dilation, and
// K_T^* (f (x) I) K_T = f(T) for every polynomial f.

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyball/fockmodel.hpp"
#include "polyball/polyball.hpp"

namespace polyball {

struct BerezinKernel {
  RowTuple tuple;
  linalg::PsdSplit defect;            // Delta_T(I) in its canonical frame
  std::optional<int> nilpotency;      // joint order d, if T is jointly nilpotent
  std::shared_ptr<const TruncatedModel> model;
  Matrix matrix;                      // (model.dim() * defect_dim) x dim
  double isometry_residual = 0.0;     // ||K^* K - I||; the series tail when not nilpotent
  double intertwining_residual = 0.0;

  std::size_t defect_dim() const { return defect.rank(); }
  int degree() const { return model->degree(); }
};

// Rejects non-members and non-pure tuples (RejectionError). For jointly
// nilpotent T the default degree is d and the kernel is exact; otherwise the
// series is cut at `degree` (default 24) and the tail shows up in the
// isometry residual.
BerezinKernel berezin_kernel(const RowTuple& t, const Tolerances& tol = {}, std::optional<int> degree = {});

// Sum over p in {0..d}^k of Phi_{T_1}^{p_1}...Phi_{T_k}^{p_k}[Delta_T(I)], minus I.
double series_identity_residual(const RowTuple& t, int d);

// K^* (f (x) I) K with f compressed to the kernel's model.
Matrix berezin_transform(const BerezinKernel& kernel, const StarPolynomial& f);

struct TransformReport {
  Matrix value;                        // Psi_T(f) (at the last r for non-pure T)
  std::optional<double> direct_residual;  // ||Psi_T(f) - f(T)||, pure case
  std::vector<std::pair<double, double>> increments;  // (r, ||Psi_{r_j} - Psi_{r_{j-1}}||)
};
// Pure T: the exact transform compared with direct evaluation. Otherwise the
// transform of rT along `rs`, with the Cauchy increments.
TransformReport berezin_transform(const RowTuple& t, const StarPolynomial& f, const std::vector<double>& rs = {},
                                  const Tolerances& tol = {});

struct VnReport {
  double lhs = 0.0;  // ||f(T)||
  double rhs = 0.0;  // ||f(S)|| on the degree-D' truncation
  int degree = 0;
  bool pass = false;
};
// Jointly nilpotent member T of order d, D' >= d + creator_degree(f).
VnReport vn_check(const RowTuple& t, const StarPolynomial& f, std::optional<int> degree = {},
                  const Tolerances& tol = {});

using PhaseMap = std::map<std::pair<int, int>, Phase>;  // (i, s) -> z_{i,s}

// Unimodular z as an exact phase; ConfigError if |z| != 1 or z is not a
// root of unity of order dividing max_modulus.
Phase unimodular_phase(cplx z, std::int64_t max_modulus = 720720);

RowTuple rescale_tuple(const RowTuple& t, const PhaseMap& z);
// rho_z(S_alpha S_beta^*) = z^alpha conj(z)^beta S_alpha S_beta^*.
StarPolynomial rho(const StarPolynomial& f, const PhaseMap& z);
// ||B_T[rho_z(f)] - B_{zT}[f]|| for a pure member T.
double rescale_invariance_residual(const RowTuple& t, const PhaseMap& z, const StarPolynomial& f,
                                   const Tolerances& tol = {});

struct DilationRecord {
  BerezinKernel kernel;
  double coinvariance_residual = 0.0;  // ||(V^* (x) I) K - K T^*||
  double compression_residual = 0.0;   // ||K^* V K - T||
  int span_degree = -1;                // largest m with (degree <= m) (x) D_T inside the span
  int span_guarantee = -1;             // D - d - k
  bool span_ok = false;

  // V_{i,s} = S_{i,s} (x) I_{D_T}, dense.
  Matrix dilation_operator(int block, int letter) const;
  nlohmann::json to_json() const;
};
// Pure member T. The model degree defaults to d + k + 1 so that the span
// property has a nonempty interior.
DilationRecord minimal_dilation(const RowTuple& t, const Tolerances& tol = {}, std::optional<int> degree = {});

struct MomentReport {
  struct Sample {
    double r;
    int degree;
    double dilation_residual;  // max over m of ||P_H V^{m-} V^{*m+}|_H - (rT)^{m-} (rT)^{*m+}||
    double distance_to_t;      // max over m of ||(rT)^{m-}(rT)^{*m+} - T^{m-} T^{*m+}||
  };
  bool exact = false;  // nilpotent T, single sample at r = 1
  int max_total = 0;
  std::size_t moments = 0;
  std::vector<Sample> samples;
  bool trend_decreasing = true;
  bool pass = false;

  nlohmann::json to_json() const;
};
// n = (1,...,1) only; all m in Z^k with |m_1|+...+|m_k| <= max_total.
MomentReport moment_check(const RowTuple& t, int max_total, const Tolerances& tol = {},
                          const std::vector<double>& rs = {0.5, 0.7, 0.8, 0.9});

}  // namespace polyball
