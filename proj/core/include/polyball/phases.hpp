#pragma once

// Exact roots of unity for the twist Lambda = {lambda_{i,j}(s,t)}.
//
// A Phase is exp(2*pi*i*turns/modulus). Products of phases with different
// moduli are carried at the lcm, so arithmetic never rounds.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyball/mwords.hpp"

namespace polyball {

class Phase {
public:
  Phase() = default;
  Phase(std::int64_t turns, std::int64_t modulus);

  static Phase identity() { return {}; }

  std::int64_t turns() const noexcept { return turns_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  bool is_identity() const noexcept { return turns_ == 0; }

  Phase operator*(const Phase& o) const;
  Phase& operator*=(const Phase& o) { return *this = *this * o; }
  Phase conj() const { return {modulus_ - turns_, modulus_}; }
  Phase pow(std::int64_t e) const;

  // Quarter turns are returned exactly (1, i, -1, -i).
  std::complex<double> value() const;

  // Nearest phase with the given modulus (angle rounding).
  static Phase from_complex(std::complex<double> z, std::int64_t modulus);

  // Reduced representation, so equal phases compare equal.
  bool operator==(const Phase& o) const;

  // "1", "-1", "i", "-i", or "e(p/q)".
  std::string str() const;

private:
  std::int64_t turns_ = 0;
  std::int64_t modulus_ = 1;
};

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// "p/q" or an integer; result is reduced with den > 0.
Fraction parse_turns(std::string_view text);

struct LambdaEntry {
  int i = 0, j = 0, s = 0, t = 0;
  Fraction turns;
};

class PhaseMatrix {
public:
  PhaseMatrix() = default;

  std::size_t k() const noexcept { return n_.size(); }
  const Arities& n() const noexcept { return n_; }
  int arity(int block) const { return n_.at(static_cast<std::size_t>(block - 1)); }
  std::int64_t modulus() const noexcept { return modulus_; }

  // lambda_{i,j}(s,t); identity when i == j is never requested (UsageError).
  Phase lambda(int i, int j, int s, int t) const;

  // Untwisted (all entries 1) matrix for the given arities.
  static PhaseMatrix trivial(Arities n);

  bool operator==(const PhaseMatrix& o) const = default;

private:
  friend PhaseMatrix validate_lambda(Arities n, std::span<const LambdaEntry> raw);

  std::size_t global(int block, int letter) const;

  Arities n_;
  std::vector<std::size_t> offset_;
  std::int64_t modulus_ = 1;
  std::vector<std::int64_t> turns_;  // row-major over global (i,s) x (j,t), units of 1/modulus
};

// Builds Lambda from raw (i,j,s,t,turns) entries. Missing directions are
// filled by conjugation; pairs never mentioned are untwisted. Throws
// ValidationError (pointer "/<index>") on i == j, out-of-range indices, or a
// pair whose two directions are not conjugate.
PhaseMatrix validate_lambda(Arities n, std::span<const LambdaEntry> raw);

// prod over the letters j_b of beta of lambda_{i,j}(s, j_b); identity for empty beta.
Phase aggregate_phase(const PhaseMatrix& lambda, int i, int s, const Word& beta);

// prod over letters a of alpha, b of beta of lambda_{i,j}(a, b).
Phase aggregate_phase_words(const PhaseMatrix& lambda, const Word& alpha, const Word& beta);

}  // namespace polyball
