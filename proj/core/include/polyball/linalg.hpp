#pragma once

// Dense complex linear algebra used throughout: norms, Hermitian spectra,
// PSD square roots with an explicit clamping policy, ranges and ranks.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace polyball {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace linalg {

inline constexpr double kRankTol = 1e-9;

double spectral_norm(const Matrix& a);

// Ascending eigenvalues of the Hermitian part of `a`.
RealVector hermitian_eigenvalues(const Matrix& a);
double min_eigenvalue(const Matrix& a);
double max_eigenvalue(const Matrix& a);

// Eigen-split of a PSD matrix: a ~= frame * diag(values) * frame^*, keeping
// eigenvalues > rank_tol. Eigenvalues in [-neg_tol, rank_tol] are clamped to
// zero; anything below -neg_tol throws RejectionError.
struct PsdSplit {
  Matrix frame;        // dim x r, orthonormal columns
  RealVector values;   // r positive eigenvalues
  double min_eigenvalue = 0.0;

  std::size_t rank() const { return static_cast<std::size_t>(values.size()); }
  // frame * diag(sqrt(values)) * frame^*
  Matrix sqrt() const;
  // diag(sqrt(values)) * frame^*, i.e. a^{1/2} in frame coordinates
  Matrix root_coordinates() const;
};
PsdSplit psd_split(const Matrix& a, double neg_tol, double rank_tol = kRankTol);

// Orthonormal basis of the column span (singular values > tol * max(1, sigma_max)).
Matrix orthonormal_range(const Matrix& a, double tol = kRankTol);
std::size_t numerical_rank(const Matrix& a, double tol = kRankTol);

Matrix kron(const Matrix& a, const Matrix& b);

// Rows/columns of `a` selected by `idx`.
Matrix submatrix(const Matrix& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols);
Matrix columns(const Matrix& a, std::span<const std::size_t> cols);

// Projection onto the coordinate vectors listed in `idx`.
Matrix coordinate_projection(std::size_t dim, std::span<const std::size_t> idx);

// Dimension of {X : U_j X = X U_j for all j} (also commuting with U_j^*).
std::size_t commutant_dimension(std::span<const Matrix> ops, double tol = 1e-9);

}  // namespace linalg
}  // namespace polyball
