#pragma once

// Deterministic randomness. SplitMix64 drives everything; normals use our own
// Box-Muller so streams agree across standard libraries and platforms.
// split() derives an independent child stream from the next output.

#include <cstdint>

#include "polyball/linalg.hpp"

namespace polyball {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  Rng split() { return Rng(next() ^ 0x6a09e667f3bcc909ULL); }

  // [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  int integer(int lo, int hi);
  bool coin() { return (next() >> 63) != 0; }
  double normal();
  // Standard complex normal (E|z|^2 = 1).
  cplx cnormal();

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols);
  Vector gaussian_vector(Eigen::Index n) { return gaussian(n, 1).col(0); }
  // Haar-distributed unitary via QR with the diagonal phases removed.
  Matrix unitary(Eigen::Index n);
  Matrix hermitian(Eigen::Index n);

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace polyball
