#include "doctest.h"

#include <set>

#include "polyball/errors.hpp"
#include "polyball/mwords.hpp"

using namespace polyball;

namespace {

// Independent count: sum over length profiles (l_1..l_k), sum <= D, of prod n_i^{l_i}.
std::size_t brute_count(const Arities& n, std::size_t block, int budget) {
  if (block == n.size()) return 1;
  std::size_t total = 0;
  std::size_t pw = 1;
  for (int len = 0; len <= budget; ++len) {
    total += pw * brute_count(n, block + 1, budget - len);
    pw *= static_cast<std::size_t>(n[block]);
  }
  return total;
}

MultiWord mw(std::vector<std::vector<int>> parts) {
  auto w = MultiWord::empty(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) w.parts[i].letters = parts[i];
  return w;
}

}  // namespace

TEST_CASE("enumerate_basis sizes") {
  CHECK(enumerate_basis(Arities{1, 1}, 2).size() == 6);
  CHECK(enumerate_basis(Arities{2, 1}, 2).size() == 11);
  const auto single = enumerate_basis(Arities{1}, 0);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == MultiWord::empty(1));
}

TEST_CASE("enumerate_basis matches the brute-force count") {
  for (const Arities& n : {Arities{1}, Arities{3}, Arities{1, 1}, Arities{2, 1}, Arities{2, 2, 1}, Arities{1, 1, 1}}) {
    for (int d = 0; d <= 4; ++d) {
      CAPTURE(d);
      const auto expected = brute_count(n, 0, d);
      CHECK(enumerate_basis(n, d).size() == expected);
      CHECK(basis_size(n, d) == expected);
    }
  }
}

TEST_CASE("basis is strictly ordered and closed under stripping") {
  const Arities n{2, 1, 2};
  const auto basis = enumerate_basis(n, 3);
  std::set<MultiWord> seen(basis.begin(), basis.end());
  CHECK(seen.size() == basis.size());
  for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1] < basis[i]);
  for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1].total_degree() <= basis[i].total_degree());
  for (const auto& w : basis) {
    for (int b = 1; b <= 3; ++b) {
      if (!w.part(b).empty()) CHECK(seen.count(strip_leftmost(w, b)) == 1);
    }
  }
}

TEST_CASE("prepend_letter examples") {
  const Arities n{2, 1};
  CHECK(prepend_letter(mw({{}, {}}), 1, 1, n) == mw({{1}, {}}));
  CHECK(prepend_letter(mw({{1}, {}}), 2, 1, n) == mw({{1}, {1}}));
  CHECK(prepend_letter(mw({{2, 1}, {}}), 1, 1, n) == mw({{1, 2, 1}, {}}));
}

TEST_CASE("prepend then strip is the identity") {
  const Arities n{2, 3};
  for (const auto& w : enumerate_basis(n, 3)) {
    for (int b = 1; b <= 2; ++b) {
      for (int s = 1; s <= n[static_cast<std::size_t>(b - 1)]; ++s) {
        const auto p = prepend_letter(w, b, s, n);
        CHECK(p.total_degree() == w.total_degree() + 1);
        CHECK(strip_leftmost(p, b) == w);
      }
    }
  }
}

TEST_CASE("usage and configuration errors") {
  CHECK_THROWS_AS(enumerate_basis(Arities{}, 2), ConfigError);
  CHECK_THROWS_AS(enumerate_basis(Arities{1, 0}, 2), ConfigError);
  const Arities n{2, 1};
  CHECK_THROWS_AS(prepend_letter(mw({{}, {}}), 3, 1, n), UsageError);
  CHECK_THROWS_AS(prepend_letter(mw({{}, {}}), 2, 2, n), UsageError);
  CHECK_THROWS_AS(strip_leftmost(mw({{}, {}}), 1), UsageError);
}

TEST_CASE("text form") {
  const Arities n{2, 1};
  CHECK(to_string(mw({{1, 2}, {}})) == "1.2|e");
  CHECK(parse_multiword("1.2|e", n) == mw({{1, 2}, {}}));
  for (const auto& w : enumerate_basis(n, 3)) CHECK(parse_multiword(to_string(w), n) == w);
  CHECK_THROWS_AS(parse_multiword("3|e", n), ConfigError);
  CHECK_THROWS_AS(parse_multiword("1", n), ConfigError);
  CHECK_THROWS_AS(parse_multiword("e|e|e", n), ConfigError);
}
