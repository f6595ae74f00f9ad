#include "polyball/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyball/errors.hpp"

namespace polyball::linalg {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const double fro = a.norm();
  if (fro == 0.0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return fro;
  // largest eigenvalue of the smaller Gram matrix
  const Matrix g = a.rows() <= a.cols() ? Matrix(a * a.adjoint()) : Matrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

RealVector hermitian_eigenvalues(const Matrix& a) {
  if (a.size() == 0) return {};
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return hermitian_eigenvalues(a).minCoeff();
}

double max_eigenvalue(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return hermitian_eigenvalues(a).maxCoeff();
}

Matrix PsdSplit::sqrt() const {
  return frame * values.cwiseSqrt().cast<cplx>().asDiagonal() * frame.adjoint();
}

Matrix PsdSplit::root_coordinates() const {
  return values.cwiseSqrt().cast<cplx>().asDiagonal() * frame.adjoint();
}

PsdSplit psd_split(const Matrix& a, double neg_tol, double rank_tol) {
  PsdSplit out;
  const auto n = a.rows();
  if (n == 0) {
    out.frame = Matrix(0, 0);
    return out;
  }
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& ev = es.eigenvalues();
  out.min_eigenvalue = ev.minCoeff();
  if (out.min_eigenvalue < -neg_tol) {
    throw RejectionError("operator is not positive: minimum eigenvalue " +
                         std::to_string(out.min_eigenvalue) + " below -" + std::to_string(neg_tol));
  }
  std::vector<Eigen::Index> keep;
  // descending, so the frame order is canonical (largest first)
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (ev(i) > rank_tol) keep.push_back(i);
  }
  out.frame.resize(n, static_cast<Eigen::Index>(keep.size()));
  out.values.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    auto col = es.eigenvectors().col(keep[c]);
    // fix the phase: first entry of largest modulus made real positive
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    const cplx ph = col(arg) / std::abs(col(arg));
    out.frame.col(static_cast<Eigen::Index>(c)) = col / ph;
    out.values(static_cast<Eigen::Index>(c)) = ev(keep[c]);
  }
  return out;
}

Matrix orthonormal_range(const Matrix& a, double tol) {
  if (a.size() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

std::size_t numerical_rank(const Matrix& a, double tol) {
  return static_cast<std::size_t>(orthonormal_range(a, tol).cols());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix submatrix(const Matrix& a, std::span<const std::size_t> rows, std::span<const std::size_t> cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          a(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    }
  }
  return out;
}

Matrix columns(const Matrix& a, std::span<const std::size_t> cols) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = a.col(static_cast<Eigen::Index>(cols[j]));
  }
  return out;
}

Matrix coordinate_projection(std::size_t dim, std::span<const std::size_t> idx) {
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (auto i : idx) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return p;
}

std::size_t commutant_dimension(std::span<const Matrix> ops, double tol) {
  if (ops.empty()) return 0;
  const auto n = ops.front().rows();
  const Matrix id = Matrix::Identity(n, n);
  // vec(UX - XU) = (I (x) U - U^T (x) I) vec(X)
  Matrix stacked(0, n * n);
  for (const auto& u : ops) {
    for (const Matrix& v : {u, Matrix(u.adjoint())}) {
      const Matrix block = kron(id, v) - kron(v.transpose(), id);
      Matrix next(stacked.rows() + block.rows(), n * n);
      next << stacked, block;
      stacked = std::move(next);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const auto& sv = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * std::max(1.0, sv(0))) ++rank;
  }
  return static_cast<std::size_t>(n * n) - rank;
}

}  // namespace polyball::linalg
