#pragma once

// Doubly Lambda-commuting tuples assembled from standard pieces, their Wold
// projections and wandering data.
//
// A piece with shift blocks A and wandering space L = C^w acts on
// l2(prod_{i in A} F+_{n_i}) (x) L:
//   S_{i,s}  (i in A):     the twisted shift on the A-blocks, identity on L
//   W_{j,1}  (j not in A): prod_{i in A} lambda_{j,i}(1, alpha_i) chi_alpha (x) U_j h
// The shift part is truncated at total degree D.

#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "polyball/polyball.hpp"
#include "polyball/random.hpp"

namespace polyball {

struct PieceSpec {
  std::vector<int> shifts;           // A, sorted, 1-based
  int wandering_dim = 1;
  std::map<int, Matrix> unitaries;   // j in A^c -> U_j on C^w
};

struct TupleSpec {
  std::vector<PieceSpec> pieces;
};

// Throws ConfigError (pointer "/pieces/<p>/...") for malformed pieces, a block
// outside A with n_j > 1, non-unitary U_j or U_i U_j != lambda_{ij} U_j U_i.
void validate_spec(const PhaseMatrix& lambda, const TupleSpec& spec);

struct PieceLayout {
  std::uint32_t mask = 0;           // bit i-1 set for i in A
  std::size_t offset = 0;
  std::size_t dim = 0;
  int wandering_dim = 0;
  std::vector<MultiWord> basis;     // k-part multi-words, empty outside A
};

struct Assembly {
  RowTuple tuple;
  int degree = 0;
  std::vector<PieceLayout> pieces;
  std::vector<int> index_degree;    // total degree of each ambient index

  // Ambient indices of total degree <= D - m.
  std::vector<std::size_t> interior(int m) const;
};

Assembly assemble(const PhaseMatrix& lambda, const TupleSpec& spec, int degree);

struct WoldProjections {
  std::vector<Matrix> shift_part;    // P_i^{(s)} = E_i(D-1) = I - Phi_i^D(I)
  std::vector<Matrix> cuntz_part;    // P_i^{(c)} = F_i(D) = Phi_i^D(I)
  std::map<std::uint32_t, Matrix> subsets;  // P_A, keyed by mask of A
  double stabilization = 0.0;       // ||F_i(D) - F_i(D-1)|| on degree <= D - 2
  double idempotence = 0.0;
  double orthogonality = 0.0;
  double completeness = 0.0;        // ||sum_A P_A - I|| on the interior
  double commutation = 0.0;         // ||P_A V - V P_A||, ||P_A V^* - V^* P_A|| on degree <= D - 2
  bool pass = false;
};
// Rejects tuples that are not doubly Lambda-commuting on the interior.
WoldProjections wold_projections(const Assembly& a, const Tolerances& tol = {});

struct WanderingBlock {
  int dim = 0;
  Matrix basis;                      // orthonormal columns spanning L_A
  std::map<int, Matrix> unitaries;   // j in A^c with n_j = 1 -> V_j restricted to L_A
  double invariance = 0.0;           // ||(I - Q Q^*) V_j Q||
  double unitarity = 0.0;            // ||U^* U - I||
  double kernel = 0.0;               // ||V_{i,s}^* Q|| for i in A
};

struct WanderingData {
  std::size_t k = 0;
  std::map<std::uint32_t, WanderingBlock> blocks;  // every subset, possibly dim 0

  nlohmann::json to_json() const;
};
WanderingData wandering_data(const Assembly& a, const Tolerances& tol = {});
// The data planted by a spec, for comparison.
WanderingData planted_data(const PhaseMatrix& lambda, const TupleSpec& spec);

enum class Verdict { Equivalent, NotEquivalent, Inconclusive };
const char* to_string(Verdict v);

struct EquivalenceReport {
  Verdict verdict = Verdict::Equivalent;
  std::map<std::uint32_t, Verdict> per_subset;
};
EquivalenceReport equivalence_check(const WanderingData& a, const WanderingData& b, double tol = 1e-8);

// Random spec with k <= 3, wandering dims <= max_wandering and shift pieces
// kept under max_total ambient dimensions. The twist among n = 1 blocks comes
// from one Weyl pair of order N: U_j = C^{a_j} X^{b_j} (x) diag(phases), so
// lambda_{ij}(1,1) = w^{a_i b_j - a_j b_i}.
struct RandomSpec {
  PhaseMatrix lambda;
  TupleSpec spec;
  int degree = 0;
  int modulus = 0;
};
RandomSpec random_spec(Rng& rng, int max_wandering = 6, std::size_t max_total = 160);

nlohmann::json spec_to_json(const TupleSpec& spec);

}  // namespace polyball
