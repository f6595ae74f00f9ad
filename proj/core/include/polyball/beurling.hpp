#pragma once

// Invariant and co-invariant subspaces of S (x) I on the truncated model
// tensor an auxiliary C^aux: span identities, Beurling-type tests, the
// factorization Y = A A^* with A multi-analytic, and compression models.

#include <memory>

#include <nlohmann/json.hpp>

#include "polyball/berezin.hpp"
#include "polyball/fockmodel.hpp"
#include "polyball/polyball.hpp"
#include "polyball/random.hpp"
#include "polyball/wold.hpp"

namespace polyball {

struct SubspaceHandle {
  std::shared_ptr<const TruncatedModel> model;
  std::size_t aux = 1;
  Matrix basis;               // orthonormal columns in model (x) C^aux
  double conditioning = 1.0;  // sigma_min / sigma_max of the ingested vectors

  // Orthonormalizes the columns of `vectors`; dependent columns are dropped.
  static SubspaceHandle from_vectors(std::shared_ptr<const TruncatedModel> model, std::size_t aux,
                                     const Matrix& vectors);

  std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
  std::size_t ambient() const { return model->dim() * aux; }
  Matrix projection() const { return basis * basis.adjoint(); }
};

// S (x) I_aux as a row tuple on the ambient space.
RowTuple ambient_shifts(const TruncatedModel& model, std::size_t aux);

// (id - Phi_1) o ... o (id - Phi_k) applied to y, for S (x) I_aux.
Matrix shift_defect(const TruncatedModel& model, std::size_t aux, const Matrix& y);

struct Violation {
  double residual = 0.0;
  int block = 0;
  int letter = 0;
};
// max ||(I - P_M)(S_{i,s}^* (x) I) Q|| with the worst (i, s).
Violation coinvariance_violation(const SubspaceHandle& m);

struct SpanReport {
  Matrix wandering;          // orthonormal basis of L = (P_C (x) I) M, in C^aux
  int span_dim = 0;
  double containment = 0.0;  // ||(I (x) (I - P_L)) span||
  int contained_degree = -1; // chi_gamma (x) L inside the span for |gamma| <= this
  bool pass = false;

  nlohmann::json to_json() const;
};
// Rejects non-co-invariant M, naming the violating (i, s).
SpanReport coinvariant_span(const SubspaceHandle& m, double tol = 1e-9);

struct BeurlingConditions {
  int buffer = 0;
  double invariance = 0.0;       // on M restricted to degree <= D - b
  double defect_min_eigenvalue = 0.0;  // Delta(P_M) on degree <= D - b
  double doubly_residual = 0.0;  // restricted tuple, on M restricted to degree <= D - b
  bool positive = false;
  bool doubly = false;
  bool is_beurling = false;

  nlohmann::json to_json() const;
};
// Rejects buffers b < 2 and subspaces that are not invariant where the
// images stay inside the truncation.
BeurlingConditions beurling_conditions(const SubspaceHandle& m, int buffer, const Tolerances& tol = {});

struct Factorization {
  Matrix a;                                    // (model.dim * aux) x (domain.dim * domain_aux)
  std::shared_ptr<const TruncatedModel> domain;
  std::size_t domain_aux = 0;
  RowTuple tuple;                              // T_{i,s} = C_{i,s}^* on range(Y)
  double defect_min_eigenvalue = 0.0;
  double coordinate_residual = 0.0;            // ||C R - R (S^* (x) I)||
  double factor_residual = 0.0;                // ||Y - A A^*|| on the interior
  double analytic_residual = 0.0;              // ||A (S (x) I) - (S (x) I) A|| on domain degree <= d - 1

  nlohmann::json to_json() const;
};
// Y Hermitian on the ambient space with Delta(Y) >= -tol on degree <= D - k;
// RejectionError otherwise.
Factorization beurling_factorize(std::shared_ptr<const TruncatedModel> model, std::size_t aux, const Matrix& y,
                                 const Tolerances& tol = {});

struct CompressionModel {
  RowTuple tuple;              // P_M (S (x) I)|_M in the basis of M
  MembershipReport membership;
  std::size_t defect_rank = 0;
  std::size_t wandering_dim = 0;
  bool rank_matches = false;

  nlohmann::json to_json() const;
};
CompressionModel compression_model(const SubspaceHandle& m, const Tolerances& tol = {});

// Scalar-model compressions: Equivalent only when M = M', NotEquivalent when
// the length-4 trace fingerprints differ, Inconclusive otherwise.
Verdict compare_compressions(const SubspaceHandle& a, const SubspaceHandle& b, double tol = 1e-8);

// Twisted right creation R_{i,s}: appends g_s to part i with phase
// prod_{j > i} lambda_{j,i}(alpha_j, s). Commutes with every S_{j,t}.
Matrix right_shift(const TruncatedModel& model, int block, int letter);
// Product of right shifts appending the letters of gamma, block by block.
Matrix right_word(const TruncatedModel& model, const MultiWord& gamma);

struct PlantedInner {
  Matrix psi;             // (dim * out_aux) x (dim * in_aux)
  std::size_t in_aux = 1;
  std::size_t out_aux = 1;
  int shift_degree = 0;   // common total degree of the planted gammas
};
// Psi = sum_j R_{gamma_j} (x) Theta_j with all gamma_j of one length profile
// and [Theta_1; ...; Theta_J] an isometry: an isometric multi-analytic map.
PlantedInner random_inner(const TruncatedModel& model, Rng& rng, int max_aux = 2, int max_shift = 2);

}  // namespace polyball
