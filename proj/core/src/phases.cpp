#include "polyball/phases.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include "polyball/errors.hpp"

namespace polyball {

namespace {

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

}  // namespace

Phase::Phase(std::int64_t turns, std::int64_t modulus) {
  if (modulus < 1) throw UsageError("phase modulus must be positive");
  turns = mod_pos(turns, modulus);
  const auto g = std::gcd(turns, modulus);
  turns_ = turns / g;
  modulus_ = modulus / g;
}

Phase Phase::operator*(const Phase& o) const {
  const auto l = std::lcm(modulus_, o.modulus_);
  return {turns_ * (l / modulus_) + o.turns_ * (l / o.modulus_), l};
}

Phase Phase::pow(std::int64_t e) const {
  // turns * e can overflow for huge e; reduce the exponent first.
  return {turns_ * mod_pos(e, modulus_), modulus_};
}

std::complex<double> Phase::value() const {
  if ((4 * turns_) % modulus_ == 0) {
    switch ((4 * turns_) / modulus_) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(turns_) /
                       static_cast<double>(modulus_);
  return std::polar(1.0, angle);
}

Phase Phase::from_complex(std::complex<double> z, std::int64_t modulus) {
  const double frac = std::arg(z) / (2.0 * std::numbers::pi);
  const auto t = static_cast<std::int64_t>(std::llround(frac * static_cast<double>(modulus)));
  return {t, modulus};
}

bool Phase::operator==(const Phase& o) const {
  return turns_ == o.turns_ && modulus_ == o.modulus_;
}

std::string Phase::str() const {
  if (turns_ == 0) return "1";
  if (modulus_ == 2) return "-1";
  if (modulus_ == 4) return turns_ == 1 ? "i" : "-i";
  return "e(" + std::to_string(turns_) + "/" + std::to_string(modulus_) + ")";
}

Fraction parse_turns(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::optional<std::int64_t> {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
  };
  Fraction f;
  auto slash = text.find('/');
  auto num = parse_int(text.substr(0, slash));
  std::optional<std::int64_t> den = 1;
  if (slash != std::string_view::npos) den = parse_int(text.substr(slash + 1));
  if (!num || !den || *den == 0) {
    throw ConfigError("turns must be 'p/q' with q != 0, got '" + std::string(text) + "'");
  }
  f.num = *num;
  f.den = *den;
  if (f.den < 0) {
    f.num = -f.num;
    f.den = -f.den;
  }
  const auto g = std::gcd(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f;
}

std::size_t PhaseMatrix::global(int block, int letter) const {
  if (block < 1 || static_cast<std::size_t>(block) > n_.size()) {
    throw UsageError("block index " + std::to_string(block) + " out of range");
  }
  if (letter < 1 || letter > n_[static_cast<std::size_t>(block - 1)]) {
    throw UsageError("letter " + std::to_string(letter) + " out of range for block " +
                     std::to_string(block));
  }
  return offset_[static_cast<std::size_t>(block - 1)] + static_cast<std::size_t>(letter - 1);
}

Phase PhaseMatrix::lambda(int i, int j, int s, int t) const {
  if (i == j) throw UsageError("lambda_{i,j} is only defined for i != j");
  const auto a = global(i, s);
  const auto b = global(j, t);
  return {turns_[a * offset_.back() + b], modulus_};
}

PhaseMatrix PhaseMatrix::trivial(Arities n) { return validate_lambda(std::move(n), {}); }

PhaseMatrix validate_lambda(Arities n, std::span<const LambdaEntry> raw) {
  validate_arities(n);
  PhaseMatrix m;
  m.n_ = std::move(n);
  m.offset_.assign(m.n_.size() + 1, 0);
  for (std::size_t i = 0; i < m.n_.size(); ++i) {
    m.offset_[i + 1] = m.offset_[i] + static_cast<std::size_t>(m.n_[i]);
  }
  const std::size_t g = m.offset_.back();

  auto where = [](const LambdaEntry& e) {
    return "(i,j,s,t)=(" + std::to_string(e.i) + "," + std::to_string(e.j) + "," +
           std::to_string(e.s) + "," + std::to_string(e.t) + ")";
  };

  std::int64_t modulus = 1;
  for (std::size_t idx = 0; idx < raw.size(); ++idx) {
    const auto& e = raw[idx];
    const auto ptr = "/" + std::to_string(idx);
    const auto k = static_cast<int>(m.n_.size());
    if (e.i < 1 || e.i > k || e.j < 1 || e.j > k) {
      throw ValidationError("block index out of range at " + where(e), ptr);
    }
    if (e.i == e.j) throw ValidationError("intra-block twist at " + where(e) + " is not allowed", ptr);
    if (e.s < 1 || e.s > m.n_[static_cast<std::size_t>(e.i - 1)] || e.t < 1 ||
        e.t > m.n_[static_cast<std::size_t>(e.j - 1)]) {
      throw ValidationError("letter index out of range at " + where(e), ptr);
    }
    if (e.turns.den < 1) throw ValidationError("non-positive denominator at " + where(e), ptr);
    modulus = std::lcm(modulus, e.turns.den);
  }
  m.modulus_ = modulus;

  // -1 marks "not given"
  std::vector<std::int64_t> given(g * g, -1);
  std::vector<std::size_t> origin(g * g, 0);
  for (std::size_t idx = 0; idx < raw.size(); ++idx) {
    const auto& e = raw[idx];
    const auto ptr = "/" + std::to_string(idx);
    const auto a = m.global(e.i, e.s);
    const auto b = m.global(e.j, e.t);
    const auto turns = mod_pos(e.turns.num * (modulus / e.turns.den), modulus);
    auto& slot = given[a * g + b];
    if (slot >= 0 && slot != turns) {
      throw ValidationError("entry " + where(e) + " given twice with different values", ptr);
    }
    slot = turns;
    origin[a * g + b] = idx;
    const auto mirror = given[b * g + a];
    if (mirror >= 0 && mod_pos(mirror + turns, modulus) != 0) {
      throw ValidationError("entry " + where(e) + " is not the conjugate of its mirror entry " +
                                "(Lambda_{j,i} must equal Lambda_{i,j}^*)",
                            ptr);
    }
  }

  m.turns_.assign(g * g, 0);
  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = 0; b < g; ++b) {
      if (given[a * g + b] >= 0) {
        m.turns_[a * g + b] = given[a * g + b];
      } else if (given[b * g + a] >= 0) {
        m.turns_[a * g + b] = mod_pos(-given[b * g + a], modulus);
      }
    }
  }
  return m;
}

Phase aggregate_phase(const PhaseMatrix& lambda, int i, int s, const Word& beta) {
  if (i == beta.block) throw UsageError("aggregate_phase needs beta in a block j != i");
  Phase out;
  for (int letter : beta.letters) out *= lambda.lambda(i, beta.block, s, letter);
  return out;
}

Phase aggregate_phase_words(const PhaseMatrix& lambda, const Word& alpha, const Word& beta) {
  if (alpha.block == beta.block) throw UsageError("aggregate_phase_words needs distinct blocks");
  Phase out;
  for (int a : alpha.letters) {
    for (int b : beta.letters) out *= lambda.lambda(alpha.block, beta.block, a, b);
  }
  return out;
}

}  // namespace polyball
