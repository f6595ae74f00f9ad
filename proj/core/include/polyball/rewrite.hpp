#pragma once

// Normal forms in the *-algebra generated by {S_{i,s}} and {S_{i,s}^*}.
//
// Rules, applied to adjacent letters until none matches:
//   R1  s*_{i,s} s_{i,t}  ->  delta_{st}
//   R2  s*_{i,s} s_{j,t}  ->  conj(lambda_{i,j}(s,t)) s_{j,t} s*_{i,s}        (i != j)
//   R3  s_{i,s}  s_{j,t}  ->  lambda_{i,j}(s,t) s_{j,t} s_{i,s}               (j < i)
//   R4  s*_{i,s} s*_{j,t} ->  conj(lambda_{j,i}(t,s)) s*_{j,t} s*_{i,s}       (j < i)
// An irreducible word reads S_{1,a1}...S_{k,ak} S*_{1,b1}...S*_{k,bk}, where
// S*_{i,b} = (S_{i,b})^*, so the starred letters of block i appear reversed.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyball/mwords.hpp"
#include "polyball/phases.hpp"

namespace polyball {

struct Letter {
  bool starred = false;
  int block = 1;
  int index = 1;

  static Letter S(int block, int index) { return {false, block, index}; }
  static Letter adj(int block, int index) { return {true, block, index}; }

  bool operator==(const Letter&) const = default;
};

using LetterWord = std::vector<Letter>;

struct MonomialKey {
  MultiWord creators;
  MultiWord annihilators;

  int creator_degree() const { return creators.total_degree() + annihilators.total_degree(); }

  bool operator==(const MonomialKey&) const = default;
  auto operator<=>(const MonomialKey&) const = default;
};

struct Coefficient {
  Phase phase;
  std::complex<double> scale{1.0, 0.0};

  std::complex<double> value() const { return phase.value() * scale; }
};

struct NormalMonomial {
  Coefficient coeff;
  MonomialKey key;
};

// Letter sequence of S_{1,a1}...S_{k,ak} S*_{1,b1}...S*_{k,bk}.
LetterWord monomial_letters(const MonomialKey& key);

class StarPolynomial {
public:
  using Terms = std::map<MonomialKey, Coefficient>;

  StarPolynomial() = default;
  explicit StarPolynomial(std::size_t k) : k_(k) {}

  static StarPolynomial identity(std::size_t k);
  static StarPolynomial monomial(const NormalMonomial& m);

  std::size_t blocks() const noexcept { return k_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  // Max over terms of |alpha| + |beta|.
  int creator_degree() const;

  // Adds c at key; merged coefficients keep the existing phase and fold the
  // ratio into the scale. Terms that cancel are removed.
  void add(const MonomialKey& key, const Coefficient& c);
  StarPolynomial& operator+=(const StarPolynomial& o);
  StarPolynomial scaled(std::complex<double> a) const;

  bool operator==(const StarPolynomial& o) const;

private:
  std::size_t k_ = 0;
  Terms terms_;
};

enum class Strategy { Leftmost, Rightmost };

struct RewriteResult {
  Phase phase;
  LetterWord word;  // irreducible
};

// Exhaustive rule application with the chosen redex selection; nullopt when R1
// kills the word.
std::optional<RewriteResult> rewrite(const PhaseMatrix& lambda, LetterWord word,
                                     Strategy strategy = Strategy::Leftmost);

// Parses an irreducible word into its monomial key.
MonomialKey key_of_irreducible(const LetterWord& word, std::size_t k);

// Zero or a single normal monomial with unit scale.
StarPolynomial reduce_word(const PhaseMatrix& lambda, const LetterWord& word);

StarPolynomial multiply(const PhaseMatrix& lambda, const StarPolynomial& p, const StarPolynomial& q);
StarPolynomial adjoint(const PhaseMatrix& lambda, const StarPolynomial& p);

// "(-i)*S[1:1]S[2:1]*adj(S[1:1])"; "(1)*I" for the identity.
std::string to_string(const NormalMonomial& m);
std::string to_string(const StarPolynomial& p);
std::string to_string(const LetterWord& w);

// Accepts letters "S[i:s]" and "adj(S[i:s])", optional '*' separators and an
// optional leading "(phase)*" coefficient in the to_string format.
std::pair<Phase, LetterWord> parse_word(std::string_view text, const PhaseMatrix& lambda);

void validate_letters(const LetterWord& w, const PhaseMatrix& lambda);

}  // namespace polyball
