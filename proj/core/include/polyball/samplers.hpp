#pragma once

// Random inputs with known structure, all driven by Rng.

#include "polyball/fockmodel.hpp"
#include "polyball/polyball.hpp"
#include "polyball/random.hpp"

namespace polyball {

// Smallest subspace containing the columns of `seeds` and invariant under
// every S_{i,s}^* (x) I. Orthonormal columns.
Matrix coinvariant_closure(const TruncatedModel& model, const Matrix& seeds, std::size_t aux);

struct MemberOptions {
  int max_dim = 6;
  int max_degree = 2;
  int max_aux = 2;
  bool allow_scaling = true;
};

// Compression of S (x) I to a random co-invariant subspace of the degree-d
// model: a pure, jointly nilpotent member of the polyball, generally not
// doubly commuting. Optionally scaled by c in [1/2, 1].
RowTuple random_nilpotent_member(const PhaseMatrix& lambda, Rng& rng, const MemberOptions& opts = {});

LetterWord random_word(const PhaseMatrix& lambda, Rng& rng, int max_len);
// Up to max_terms normal monomials with |alpha| + |beta| <= max_degree and
// complex Gaussian coefficients.
StarPolynomial random_polynomial(const PhaseMatrix& lambda, Rng& rng, int max_degree, int max_terms);
// Only creation letters.
StarPolynomial random_analytic_polynomial(const PhaseMatrix& lambda, Rng& rng, int max_degree, int max_terms);

}  // namespace polyball
