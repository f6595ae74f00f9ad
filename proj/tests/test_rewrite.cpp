#include "doctest.h"

#include <random>

#include "polyball/errors.hpp"
#include "polyball/fockmodel.hpp"
#include "polyball/rewrite.hpp"

using namespace polyball;

namespace {

PhaseMatrix cfg_a() {
  const LambdaEntry e{1, 2, 1, 1, {1, 4}};
  return validate_lambda({1, 1}, std::span(&e, 1));
}

PhaseMatrix cfg_b() {
  const std::vector<LambdaEntry> raw{{1, 2, 1, 1, {1, 4}}, {1, 2, 2, 1, {1, 2}}};
  return validate_lambda({2, 1}, raw);
}

PhaseMatrix cfg_c() {
  const std::vector<LambdaEntry> raw{{1, 2, 1, 1, {1, 6}}, {1, 2, 2, 1, {2, 5}}, {1, 3, 1, 1, {1, 4}},
                                     {2, 3, 1, 1, {3, 7}}, {2, 3, 2, 1, {1, 3}}, {1, 3, 2, 1, {1, 2}}};
  return validate_lambda({2, 2, 1}, raw);
}

LetterWord random_word(std::mt19937_64& rng, const PhaseMatrix& l, int max_len) {
  LetterWord w;
  const int len = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
  for (int q = 0; q < len; ++q) {
    const int block = 1 + static_cast<int>(rng() % l.k());
    const int index = 1 + static_cast<int>(rng() % static_cast<unsigned>(l.arity(block)));
    w.push_back({(rng() & 1) != 0, block, index});
  }
  return w;
}

StarPolynomial random_polynomial(std::mt19937_64& rng, const PhaseMatrix& l, int terms, int max_len) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StarPolynomial p(l.k());
  for (int t = 0; t < terms; ++t) {
    auto r = reduce_word(l, random_word(rng, l, max_len));
    p += r.scaled({u(rng), u(rng)});
  }
  return p;
}

NormalMonomial single(const StarPolynomial& p) {
  REQUIRE(p.terms().size() == 1);
  const auto& [key, c] = *p.terms().begin();
  return {c, key};
}

}  // namespace

TEST_CASE("reduce_word examples") {
  const auto a = cfg_a();
  {
    const auto m = single(reduce_word(a, {Letter::S(2, 1), Letter::S(1, 1)}));
    CHECK(m.coeff.phase == Phase(3, 4));
    CHECK(monomial_letters(m.key) == LetterWord{Letter::S(1, 1), Letter::S(2, 1)});
    CHECK(to_string(m) == "(-i)*S[1:1]S[2:1]");
  }
  {
    const auto m = single(reduce_word(a, {Letter::adj(1, 1), Letter::S(2, 1)}));
    CHECK(m.coeff.phase == Phase(3, 4));
    CHECK(monomial_letters(m.key) == LetterWord{Letter::S(2, 1), Letter::adj(1, 1)});
  }
  const auto b = cfg_b();
  CHECK(reduce_word(b, {Letter::adj(1, 1), Letter::S(1, 2)}).is_zero());
  CHECK(reduce_word(b, {Letter::adj(1, 1), Letter::S(2, 1), Letter::S(1, 2)}).is_zero());
  CHECK(reduce_word(b, {Letter::adj(1, 2), Letter::S(1, 2)}) == StarPolynomial::identity(2));
}

TEST_CASE("annihilators come out block-ascending") {
  const auto a = cfg_a();
  // adj(S2) adj(S1) = (S1 S2)^* = ((-i)^{-1}... ) check against the symbolic action
  const LetterWord w{Letter::adj(2, 1), Letter::adj(1, 1)};
  const auto m = single(reduce_word(a, w));
  CHECK(monomial_letters(m.key) == LetterWord{Letter::adj(1, 1), Letter::adj(2, 1)});
  CHECK(to_string(m).find("adj(S[1:1])adj(S[2:1])") != std::string::npos);
}

TEST_CASE("confluence: leftmost and rightmost strategies agree") {
  std::mt19937_64 rng(2024);
  for (const auto& l : {cfg_a(), cfg_b(), cfg_c()}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto w = random_word(rng, l, 12);
      const auto left = rewrite(l, w, Strategy::Leftmost);
      const auto right = rewrite(l, w, Strategy::Rightmost);
      REQUIRE(left.has_value() == right.has_value());
      if (left) {
        CHECK(left->phase == right->phase);
        CHECK(left->word == right->word);
      }
    }
  }
}

TEST_CASE("faithfulness: normal form acts like the word") {
  std::mt19937_64 rng(99);
  for (const auto& l : {cfg_a(), cfg_b(), cfg_c()}) {
    const auto basis = enumerate_basis(l.n(), 3);
    for (int trial = 0; trial < 200; ++trial) {
      const auto w = random_word(rng, l, 8);
      const auto p = reduce_word(l, w);
      for (const auto& chi : basis) {
        const auto direct = symbolic_apply(l, w, chi);
        const auto via = symbolic_evaluate(l, p, chi);
        if (!direct) {
          CHECK(via.empty());
          continue;
        }
        REQUIRE(via.size() == 1);
        CHECK(via.begin()->first == direct->word);
        CHECK(via.begin()->second == direct->phase.value());
      }
    }
  }
}

TEST_CASE("multiply examples") {
  const auto a = cfg_a();
  std::mt19937_64 rng(5);
  const auto q = random_polynomial(rng, a, 4, 6);
  CHECK(multiply(a, StarPolynomial::identity(2), q) == q);
  const auto s = reduce_word(a, {Letter::S(1, 1)});
  const auto sa = reduce_word(a, {Letter::adj(1, 1)});
  const auto ssa = multiply(a, s, sa);
  CHECK(monomial_letters(single(ssa).key) == LetterWord{Letter::S(1, 1), Letter::adj(1, 1)});
  CHECK(multiply(a, sa, s) == StarPolynomial::identity(2));
}

TEST_CASE("multiply is associative and adjoint is an anti-involution") {
  std::mt19937_64 rng(11);
  for (const auto& l : {cfg_a(), cfg_b(), cfg_c()}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_polynomial(rng, l, 3, 5);
      const auto q = random_polynomial(rng, l, 3, 5);
      const auto r = random_polynomial(rng, l, 2, 5);
      CHECK(multiply(l, multiply(l, p, q), r) == multiply(l, p, multiply(l, q, r)));
      CHECK(adjoint(l, adjoint(l, p)) == p);
      CHECK(adjoint(l, multiply(l, p, q)) == multiply(l, adjoint(l, q), adjoint(l, p)));
    }
  }
}

TEST_CASE("adjoint examples") {
  const auto a = cfg_a();
  CHECK(adjoint(a, StarPolynomial::identity(2)) == StarPolynomial::identity(2));
  const auto s = reduce_word(a, {Letter::S(1, 1), Letter::S(1, 1)}).scaled({2.0, 3.0});
  const auto sa = reduce_word(a, {Letter::adj(1, 1), Letter::adj(1, 1)}).scaled({2.0, -3.0});
  CHECK(adjoint(a, s) == sa);
}

TEST_CASE("uniqueness: nonzero polynomials act nontrivially on a minimal-beta vector") {
  std::mt19937_64 rng(17);
  for (const auto& l : {cfg_a(), cfg_b()}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_polynomial(rng, l, 4, 6);
      if (p.is_zero()) continue;
      const MonomialKey* best = nullptr;
      for (const auto& [key, c] : p.terms()) {
        if (!best || key.annihilators.total_degree() < best->annihilators.total_degree()) best = &key;
      }
      CHECK_FALSE(symbolic_evaluate(l, p, best->annihilators).empty());
    }
  }
}

TEST_CASE("text form round trip") {
  const auto b = cfg_b();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = random_word(rng, b, 8);
    const auto p = reduce_word(b, w);
    if (p.is_zero()) continue;
    const auto m = single(p);
    const auto [phase, letters] = parse_word(to_string(m), b);
    CHECK(phase == m.coeff.phase);
    CHECK(letters == monomial_letters(m.key));
  }
  CHECK_THROWS_AS(parse_word("S[3:1]", b), ConfigError);
  CHECK_THROWS_AS(parse_word("(2)*S[1:1]", b), ConfigError);
  CHECK(parse_word("(e(1/3))*adj(S[1:2])", b).first == Phase(1, 3));
}
