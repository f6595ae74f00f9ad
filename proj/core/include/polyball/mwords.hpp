#pragma once

// Words in the free semigroups F+_{n_i} and multi-words in their product.
//
// Blocks and letters are 1-based, as in the operator notation S_{i,s}.
// A Word is stored left to right as written, so S_{i,s} acts by prepending.

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polyball {

using Arities = std::vector<int>;

// Throws ConfigError when k = 0 or some n_i < 1.
void validate_arities(std::span<const int> n);

struct Word {
  int block = 1;
  std::vector<int> letters;

  std::size_t length() const noexcept { return letters.size(); }
  bool empty() const noexcept { return letters.empty(); }

  bool operator==(const Word&) const = default;
};

struct MultiWord {
  std::vector<Word> parts;

  static MultiWord empty(std::size_t k);

  std::size_t blocks() const noexcept { return parts.size(); }
  int total_degree() const noexcept;

  // 1-based block access.
  const Word& part(int block) const { return parts.at(static_cast<std::size_t>(block - 1)); }
  Word& part(int block) { return parts.at(static_cast<std::size_t>(block - 1)); }

  bool operator==(const MultiWord&) const = default;
  // Graded order: total degree, then parts lexicographically in block order.
  std::strong_ordering operator<=>(const MultiWord& other) const;
};

// All multi-words of total degree <= max_degree, strictly increasing in the
// graded order. The position of a multi-word is its matrix index.
std::vector<MultiWord> enumerate_basis(std::span<const int> n, int max_degree);

// Number of multi-words of total degree <= max_degree, without enumerating.
std::size_t basis_size(std::span<const int> n, int max_degree);

// g_s^i concatenated on the left of part i.
MultiWord prepend_letter(const MultiWord& w, int block, int letter, std::span<const int> n);

// Inverse of prepend_letter; throws UsageError when part i is empty.
MultiWord strip_leftmost(const MultiWord& w, int block);

// "1.2|e" style text: parts separated by '|', letters by '.', 'e' for empty.
std::string to_string(const MultiWord& w);
MultiWord parse_multiword(std::string_view text, std::span<const int> n);

}  // namespace polyball
