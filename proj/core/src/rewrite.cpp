#include "polyball/rewrite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "polyball/errors.hpp"

namespace polyball {

LetterWord monomial_letters(const MonomialKey& key) {
  LetterWord out;
  for (const auto& part : key.creators.parts) {
    for (int s : part.letters) out.push_back(Letter::S(part.block, s));
  }
  for (const auto& part : key.annihilators.parts) {
    for (auto it = part.letters.rbegin(); it != part.letters.rend(); ++it) {
      out.push_back(Letter::adj(part.block, *it));
    }
  }
  return out;
}

StarPolynomial StarPolynomial::identity(std::size_t k) {
  StarPolynomial p(k);
  p.add({MultiWord::empty(k), MultiWord::empty(k)}, {});
  return p;
}

StarPolynomial StarPolynomial::monomial(const NormalMonomial& m) {
  StarPolynomial p(m.key.creators.blocks());
  p.add(m.key, m.coeff);
  return p;
}

int StarPolynomial::creator_degree() const {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.creator_degree());
  return d;
}

void StarPolynomial::add(const MonomialKey& key, const Coefficient& c) {
  if (c.scale == std::complex<double>{}) return;
  if (k_ == 0) k_ = key.creators.blocks();
  if (key.creators.blocks() != k_ || key.annihilators.blocks() != k_) {
    throw UsageError("monomial block count does not match the polynomial");
  }
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  auto& cur = it->second;
  const auto ratio = c.phase * cur.phase.conj();
  const auto before = std::max(std::abs(cur.scale), std::abs(c.scale));
  cur.scale += ratio.value() * c.scale;
  if (std::abs(cur.scale) <= 1e-14 * before) terms_.erase(it);
}

StarPolynomial& StarPolynomial::operator+=(const StarPolynomial& o) {
  for (const auto& [key, c] : o.terms_) add(key, c);
  return *this;
}

StarPolynomial StarPolynomial::scaled(std::complex<double> a) const {
  StarPolynomial out(k_);
  for (const auto& [key, c] : terms_) out.add(key, {c.phase, c.scale * a});
  return out;
}

bool StarPolynomial::operator==(const StarPolynomial& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto it = o.terms_.begin();
  for (const auto& [key, c] : terms_) {
    if (!(key == it->first)) return false;
    const auto a = c.value();
    const auto b = it->second.value();
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) return false;
    ++it;
  }
  return true;
}

void validate_letters(const LetterWord& w, const PhaseMatrix& lambda) {
  for (const auto& l : w) {
    if (l.block < 1 || static_cast<std::size_t>(l.block) > lambda.k() || l.index < 1 ||
        l.index > lambda.arity(l.block)) {
      throw UsageError("letter S[" + std::to_string(l.block) + ":" + std::to_string(l.index) +
                       "] is out of range for the model");
    }
  }
}

namespace {

enum class Step { None, Kill, Applied };

// Tries to rewrite the pair at (pos, pos+1).
Step apply_at(const PhaseMatrix& lambda, LetterWord& w, std::size_t pos, Phase& phase) {
  const Letter a = w[pos];
  const Letter b = w[pos + 1];
  if (a.starred && !b.starred) {
    if (a.block == b.block) {
      if (a.index != b.index) return Step::Kill;
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(pos), w.begin() + static_cast<std::ptrdiff_t>(pos) + 2);
      return Step::Applied;
    }
    phase *= lambda.lambda(a.block, b.block, a.index, b.index).conj();
    std::swap(w[pos], w[pos + 1]);
    return Step::Applied;
  }
  if (!a.starred && !b.starred && b.block < a.block) {
    phase *= lambda.lambda(a.block, b.block, a.index, b.index);
    std::swap(w[pos], w[pos + 1]);
    return Step::Applied;
  }
  if (a.starred && b.starred && b.block < a.block) {
    phase *= lambda.lambda(b.block, a.block, b.index, a.index).conj();
    std::swap(w[pos], w[pos + 1]);
    return Step::Applied;
  }
  return Step::None;
}

}  // namespace

std::optional<RewriteResult> rewrite(const PhaseMatrix& lambda, LetterWord word, Strategy strategy) {
  validate_letters(word, lambda);
  Phase phase;
  while (word.size() >= 2) {
    Step step = Step::None;
    const std::size_t pairs = word.size() - 1;
    for (std::size_t q = 0; q < pairs && step == Step::None; ++q) {
      const std::size_t pos = strategy == Strategy::Leftmost ? q : pairs - 1 - q;
      step = apply_at(lambda, word, pos, phase);
    }
    if (step == Step::Kill) return std::nullopt;
    if (step == Step::None) break;
  }
  return RewriteResult{phase, std::move(word)};
}

MonomialKey key_of_irreducible(const LetterWord& word, std::size_t k) {
  MonomialKey key{MultiWord::empty(k), MultiWord::empty(k)};
  bool seen_star = false;
  int last_block = 0;
  for (const auto& l : word) {
    if (l.block < 1 || static_cast<std::size_t>(l.block) > k) throw UsageError("letter block out of range");
    if (l.starred && !seen_star) {
      seen_star = true;
      last_block = 0;
    }
    if (!l.starred && seen_star) throw UsageError("word is not irreducible: creator after annihilator");
    if (l.block < last_block) throw UsageError("word is not irreducible: blocks out of order");
    last_block = l.block;
    if (l.starred) {
      auto& letters = key.annihilators.part(l.block).letters;
      letters.insert(letters.begin(), l.index);
    } else {
      key.creators.part(l.block).letters.push_back(l.index);
    }
  }
  return key;
}

StarPolynomial reduce_word(const PhaseMatrix& lambda, const LetterWord& word) {
  StarPolynomial out(lambda.k());
  if (auto r = rewrite(lambda, word)) out.add(key_of_irreducible(r->word, lambda.k()), {r->phase, 1.0});
  return out;
}

StarPolynomial multiply(const PhaseMatrix& lambda, const StarPolynomial& p, const StarPolynomial& q) {
  if ((p.blocks() && p.blocks() != lambda.k()) || (q.blocks() && q.blocks() != lambda.k())) {
    throw UsageError("multiply: polynomials do not match the model's block count");
  }
  StarPolynomial out(lambda.k());
  for (const auto& [k1, c1] : p.terms()) {
    const auto left = monomial_letters(k1);
    for (const auto& [k2, c2] : q.terms()) {
      auto word = left;
      const auto right = monomial_letters(k2);
      word.insert(word.end(), right.begin(), right.end());
      auto r = rewrite(lambda, std::move(word));
      if (!r) continue;
      out.add(key_of_irreducible(r->word, lambda.k()), {c1.phase * c2.phase * r->phase, c1.scale * c2.scale});
    }
  }
  return out;
}

StarPolynomial adjoint(const PhaseMatrix& lambda, const StarPolynomial& p) {
  StarPolynomial out(lambda.k());
  for (const auto& [key, c] : p.terms()) {
    auto word = monomial_letters(key);
    std::reverse(word.begin(), word.end());
    for (auto& l : word) l.starred = !l.starred;
    auto r = rewrite(lambda, std::move(word));
    if (!r) continue;  // unreachable: adjoint of a nonzero monomial is nonzero
    out.add(key_of_irreducible(r->word, lambda.k()), {c.phase.conj() * r->phase, std::conj(c.scale)});
  }
  return out;
}

namespace {

std::string letter_text(const Letter& l) {
  auto s = "S[" + std::to_string(l.block) + ":" + std::to_string(l.index) + "]";
  return l.starred ? "adj(" + s + ")" : s;
}

std::string coefficient_text(const Coefficient& c) {
  if (c.scale == std::complex<double>{1.0, 0.0}) return c.phase.str();
  const auto v = c.value();
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

}  // namespace

std::string to_string(const LetterWord& w) {
  if (w.empty()) return "I";
  std::string out;
  bool star_seen = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && w[i].starred && !star_seen) out += '*';
    star_seen = star_seen || w[i].starred;
    out += letter_text(w[i]);
  }
  return out;
}

std::string to_string(const NormalMonomial& m) {
  return "(" + coefficient_text(m.coeff) + ")*" + to_string(monomial_letters(m.key));
}

std::string to_string(const StarPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [key, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += to_string(NormalMonomial{c, key});
  }
  return out;
}

std::pair<Phase, LetterWord> parse_word(std::string_view text, const PhaseMatrix& lambda) {
  Phase phase;
  LetterWord word;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> ConfigError {
    return ConfigError("cannot parse word '" + std::string(text) + "': " + why);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '*')) ++pos;
  };
  auto expect = [&](std::string_view lit) {
    if (text.substr(pos, lit.size()) != lit) throw fail("expected '" + std::string(lit) + "'");
    pos += lit.size();
  };
  auto read_int = [&]() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw fail("expected an integer");
    return std::stoi(std::string(text.substr(start, pos - start)));
  };
  auto read_letter = [&](bool starred) {
    expect("S[");
    const int block = read_int();
    expect(":");
    const int index = read_int();
    expect("]");
    word.push_back({starred, block, index});
  };

  skip_ws();
  if (pos < text.size() && text[pos] == '(') {
    auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw fail("unbalanced coefficient");
    auto c = text.substr(pos + 1, close - pos - 1);
    // e(p/q) has its own parentheses
    if (c.starts_with("e(")) {
      close = text.find(')', close + 1);
      if (close == std::string_view::npos) throw fail("unbalanced coefficient");
      c = text.substr(pos + 1, close - pos - 1);
    }
    if (c == "1") {
      phase = {};
    } else if (c == "-1") {
      phase = {1, 2};
    } else if (c == "i") {
      phase = {1, 4};
    } else if (c == "-i") {
      phase = {3, 4};
    } else if (c.starts_with("e(") && c.ends_with(")")) {
      const auto f = parse_turns(c.substr(2, c.size() - 3));
      phase = {f.num, f.den};
    } else {
      throw fail("coefficient must be a phase: 1, -1, i, -i or e(p/q)");
    }
    pos = close + 1;
  }
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] == 'I') {
      ++pos;
    } else if (text.substr(pos, 4) == "adj(") {
      pos += 4;
      read_letter(true);
      expect(")");
    } else {
      read_letter(false);
    }
  }
  for (const auto& l : word) {
    if (l.block < 1 || static_cast<std::size_t>(l.block) > lambda.k() || l.index < 1 ||
        l.index > lambda.arity(l.block)) {
      throw fail("letter " + letter_text(l) + " out of range");
    }
  }
  return {phase, word};
}

}  // namespace polyball
