#include "polyball/mwords.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "polyball/errors.hpp"

namespace polyball {

void validate_arities(std::span<const int> n) {
  if (n.empty()) throw ConfigError("model needs at least one block (k >= 1)");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 1) {
      throw ConfigError("block " + std::to_string(i + 1) + " has arity " + std::to_string(n[i]) +
                        "; every n_i must be >= 1");
    }
  }
}

MultiWord MultiWord::empty(std::size_t k) {
  MultiWord w;
  w.parts.resize(k);
  for (std::size_t i = 0; i < k; ++i) w.parts[i].block = static_cast<int>(i + 1);
  return w;
}

int MultiWord::total_degree() const noexcept {
  std::size_t d = 0;
  for (const auto& p : parts) d += p.length();
  return static_cast<int>(d);
}

std::strong_ordering MultiWord::operator<=>(const MultiWord& other) const {
  if (auto c = total_degree() <=> other.total_degree(); c != 0) return c;
  if (auto c = parts.size() <=> other.parts.size(); c != 0) return c;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& a = parts[i].letters;
    const auto& b = other.parts[i].letters;
    if (auto c = std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
        c != 0) {
      return c;
    }
  }
  return std::strong_ordering::equal;
}

namespace {

// All words of exactly `len` letters over an alphabet of size `arity`.
std::vector<std::vector<int>> words_of_length(int arity, int len) {
  std::vector<std::vector<int>> out{{}};
  for (int step = 0; step < len; ++step) {
    std::vector<std::vector<int>> next;
    next.reserve(out.size() * static_cast<std::size_t>(arity));
    for (const auto& w : out) {
      for (int s = 1; s <= arity; ++s) {
        auto v = w;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

void fill(std::span<const int> n, std::size_t block, int budget, MultiWord& cur,
          std::vector<MultiWord>& out) {
  if (block == n.size()) {
    out.push_back(cur);
    return;
  }
  for (int len = 0; len <= budget; ++len) {
    for (auto& letters : words_of_length(n[block], len)) {
      cur.parts[block].letters = std::move(letters);
      fill(n, block + 1, budget - len, cur, out);
    }
  }
  cur.parts[block].letters.clear();
}

}  // namespace

std::vector<MultiWord> enumerate_basis(std::span<const int> n, int max_degree) {
  validate_arities(n);
  if (max_degree < 0) throw ConfigError("truncation degree must be >= 0");
  std::vector<MultiWord> out;
  out.reserve(basis_size(n, max_degree));
  auto cur = MultiWord::empty(n.size());
  fill(n, 0, max_degree, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t basis_size(std::span<const int> n, int max_degree) {
  validate_arities(n);
  // count[d] = number of multi-words over the blocks seen so far of total degree d
  std::vector<std::size_t> count(static_cast<std::size_t>(max_degree) + 1, 0);
  count[0] = 1;
  for (int arity : n) {
    std::vector<std::size_t> next(count.size(), 0);
    for (std::size_t d = 0; d < count.size(); ++d) {
      std::size_t pw = 1;
      for (std::size_t l = 0; d + l < count.size(); ++l) {
        next[d + l] += count[d] * pw;
        pw *= static_cast<std::size_t>(arity);
      }
    }
    count = std::move(next);
  }
  std::size_t total = 0;
  for (auto c : count) total += c;
  return total;
}

MultiWord prepend_letter(const MultiWord& w, int block, int letter, std::span<const int> n) {
  if (block < 1 || static_cast<std::size_t>(block) > w.blocks() || w.blocks() != n.size()) {
    throw UsageError("prepend_letter: block " + std::to_string(block) + " out of range");
  }
  if (letter < 1 || letter > n[static_cast<std::size_t>(block - 1)]) {
    throw UsageError("prepend_letter: letter " + std::to_string(letter) + " out of range for block " +
                     std::to_string(block));
  }
  MultiWord out = w;
  auto& letters = out.part(block).letters;
  letters.insert(letters.begin(), letter);
  return out;
}

MultiWord strip_leftmost(const MultiWord& w, int block) {
  if (block < 1 || static_cast<std::size_t>(block) > w.blocks()) {
    throw UsageError("strip_leftmost: block " + std::to_string(block) + " out of range");
  }
  if (w.part(block).empty()) throw UsageError("strip_leftmost: part is empty");
  MultiWord out = w;
  auto& letters = out.part(block).letters;
  letters.erase(letters.begin());
  return out;
}

std::string to_string(const MultiWord& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.parts.size(); ++i) {
    if (i) os << '|';
    const auto& letters = w.parts[i].letters;
    if (letters.empty()) {
      os << 'e';
      continue;
    }
    for (std::size_t j = 0; j < letters.size(); ++j) {
      if (j) os << '.';
      os << letters[j];
    }
  }
  return os.str();
}

MultiWord parse_multiword(std::string_view text, std::span<const int> n) {
  auto w = MultiWord::empty(n.size());
  std::size_t block = 0;
  std::size_t pos = 0;
  while (true) {
    auto bar = text.find('|', pos);
    auto part = text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
    if (block >= n.size()) {
      throw ConfigError("multi-word '" + std::string(text) + "' has more than k parts");
    }
    if (part != "e") {
      std::size_t p = 0;
      while (p <= part.size()) {
        auto dot = part.find('.', p);
        auto tok = part.substr(p, dot == std::string_view::npos ? std::string_view::npos : dot - p);
        int letter = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), letter);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
          throw ConfigError("bad letter '" + std::string(tok) + "' in multi-word '" +
                            std::string(text) + "'");
        }
        if (letter < 1 || letter > n[block]) {
          throw ConfigError("letter " + std::to_string(letter) + " out of range in multi-word '" +
                            std::string(text) + "'");
        }
        w.parts[block].letters.push_back(letter);
        if (dot == std::string_view::npos) break;
        p = dot + 1;
      }
    }
    ++block;
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  if (block != n.size()) {
    throw ConfigError("multi-word '" + std::string(text) + "' needs exactly " +
                      std::to_string(n.size()) + " parts");
  }
  return w;
}

}  // namespace polyball
