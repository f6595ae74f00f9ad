#include "doctest.h"

#include <cmath>
#include <numbers>

#include "polyball/berezin.hpp"
#include "polyball/errors.hpp"
#include "polyball/samplers.hpp"

using namespace polyball;

namespace {

PhaseMatrix pair_lambda(Fraction turns) {
  const LambdaEntry e{1, 2, 1, 1, turns};
  return validate_lambda({1, 1}, std::span(&e, 1));
}

RowTuple jordan(int d) { return RowTuple(PhaseMatrix::trivial({1}), {{jordan_matrix(d)}}); }

StarPolynomial s_plus_adj(const PhaseMatrix& l) {
  StarPolynomial p = reduce_word(l, {Letter::S(1, 1)});
  p += reduce_word(l, {Letter::adj(1, 1)});
  return p;
}

}  // namespace

TEST_CASE("kernel of the zero tuple on C") {
  const auto l = pair_lambda({1, 4});
  const auto k = berezin_kernel(RowTuple::zero(l, 1));
  CHECK(k.defect_dim() == 1);
  CHECK(k.degree() == 0);
  CHECK(k.matrix.rows() == 1);
  CHECK(std::abs(k.matrix(0, 0) - 1.0) < 1e-15);
  CHECK(k.isometry_residual == 0.0);
}

TEST_CASE("kernel of the 2x2 Jordan block") {
  const auto k = berezin_kernel(jordan(2));
  REQUIRE(k.defect_dim() == 1);
  REQUIRE(k.degree() == 1);
  // K e2 = chi_0 (x) e2, K e1 = chi_1 (x) e2 (frame vector e2 with phase 1)
  Matrix want = Matrix::Zero(2, 2);
  want(0, 1) = 1.0;
  want(1, 0) = 1.0;
  CHECK((k.matrix - want).norm() < 1e-15);
  CHECK(k.isometry_residual < 1e-15);
  CHECK(k.intertwining_residual < 1e-15);
}

TEST_CASE("non-pure and non-member inputs are rejected") {
  const auto torus = RowTuple(pair_lambda({1, 4}), {{clock_matrix(4)}, {shift_matrix(4)}});
  CHECK_THROWS_AS(berezin_kernel(torus), RejectionError);
  CHECK_THROWS_AS(minimal_dilation(torus), RejectionError);
  const auto big = RowTuple(PhaseMatrix::trivial({1}), {{2.0 * jordan_matrix(2)}});
  CHECK_THROWS_AS(berezin_kernel(big), RejectionError);
}

TEST_CASE("random nilpotent members: isometry, intertwining, series identity") {
  Rng rng(7);
  for (const auto& l : {pair_lambda({1, 4}), pair_lambda({1, 2}), pair_lambda({1, 3})}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto t = random_nilpotent_member(l, rng);
      const auto k = berezin_kernel(t);
      CHECK(k.isometry_residual <= 1e-10);
      CHECK(k.intertwining_residual <= 1e-10);
      CHECK(series_identity_residual(t, *k.nilpotency) <= 1e-10);
    }
  }
}

TEST_CASE("Berezin transform reproduces the polynomial calculus") {
  Rng rng(8);
  const auto l = validate_lambda({2, 1}, std::vector<LambdaEntry>{{1, 2, 1, 1, {1, 4}}, {1, 2, 2, 1, {1, 2}}});
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_nilpotent_member(l, rng);
    const auto f = random_polynomial(l, rng, 3, 4);
    const auto rep = berezin_transform(t, f);
    REQUIRE(rep.direct_residual);
    CHECK(*rep.direct_residual <= 1e-10);
    CHECK((berezin_transform(t, StarPolynomial::identity(2)).value - Matrix::Identity(
        static_cast<Eigen::Index>(t.dim()), static_cast<Eigen::Index>(t.dim()))).norm() < 1e-10);
    // multiplicative on the analytic part
    const auto g = random_analytic_polynomial(l, rng, 2, 3);
    const auto h = random_analytic_polynomial(l, rng, 2, 3);
    const auto kern = berezin_kernel(t);
    const Matrix lhs = berezin_transform(kern, multiply(l, g, h));
    const Matrix rhs = berezin_transform(kern, g) * berezin_transform(kern, h);
    CHECK(linalg::spectral_norm(lhs - rhs) <= 1e-10);
  }
  const auto z = RowTuple::zero(l, 2);
  const auto ss = reduce_word(l, {Letter::S(1, 1), Letter::adj(1, 1)});
  CHECK(berezin_transform(z, ss).value.norm() < 1e-15);
}

TEST_CASE("transform of a non-pure member along r") {
  const auto torus = RowTuple(pair_lambda({1, 4}), {{clock_matrix(4)}, {shift_matrix(4)}});
  const auto l = torus.lambda();
  const auto f = reduce_word(l, {Letter::S(1, 1), Letter::adj(2, 1)});
  const auto rep = berezin_transform(torus, f, {0.5, 0.6, 0.7});
  CHECK_FALSE(rep.direct_residual);
  REQUIRE(rep.increments.size() == 2);
  // Psi_{rT}(f) = r^2 f(T), so the increments are (r_j^2 - r_{j-1}^2) ||C X^*||
  CHECK(rep.increments[0].second == doctest::Approx(0.36 - 0.25).epsilon(1e-9));
  CHECK(rep.increments[1].second == doctest::Approx(0.49 - 0.36).epsilon(1e-9));
  CHECK(linalg::spectral_norm(rep.value - 0.49 * torus.evaluate(f)) < 1e-9);
}

TEST_CASE("von Neumann inequality examples") {
  const auto j = jordan(2);
  const auto rep = vn_check(j, s_plus_adj(j.lambda()), 3);
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(2.0 * std::cos(std::numbers::pi / 5.0)).epsilon(1e-12));
  CHECK(rep.pass);
  CHECK_THROWS_AS(vn_check(j, s_plus_adj(j.lambda()), 1), UsageError);

  Rng rng(10);
  const auto l = pair_lambda({1, 4});
  const auto s1s2 = reduce_word(l, {Letter::S(1, 1), Letter::S(2, 1)});
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_nilpotent_member(l, rng);
    const auto r = vn_check(t, s1s2);
    CHECK(r.lhs <= 1.0 + 1e-12);
    CHECK(r.rhs == doctest::Approx(1.0));
    const auto id = vn_check(t, StarPolynomial::identity(2));
    CHECK(id.lhs == doctest::Approx(1.0));
    CHECK(id.rhs == doctest::Approx(1.0));
  }
}

TEST_CASE("rescaling invariance") {
  const auto j = jordan(3);
  const auto l = j.lambda();
  CHECK((rescale_tuple(j, {}).op(1, 1) - j.op(1, 1)).norm() == 0.0);
  const PhaseMap flip{{{1, 1}, Phase(1, 2)}};
  const auto f = reduce_word(l, {Letter::S(1, 1)});
  CHECK(rescale_invariance_residual(j, flip, f) < 1e-12);
  CHECK((berezin_transform(berezin_kernel(j), rho(f, flip)) + j.op(1, 1)).norm() < 1e-12);

  Rng rng(12);
  const auto lb = validate_lambda({2, 1}, std::vector<LambdaEntry>{{1, 2, 1, 1, {1, 4}}, {1, 2, 2, 1, {1, 2}}});
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_nilpotent_member(lb, rng);
    PhaseMap z;
    for (int i = 1; i <= 2; ++i) {
      for (int s = 1; s <= lb.arity(i); ++s) z[{i, s}] = Phase(rng.integer(0, 11), 12);
    }
    CHECK(rescale_invariance_residual(t, z, random_polynomial(lb, rng, 3, 4)) <= 1e-10);
  }
  CHECK_THROWS_AS(unimodular_phase({0.5, 0.0}), ConfigError);
  CHECK(unimodular_phase({0.0, 1.0}) == Phase(1, 4));
}

TEST_CASE("minimal dilation") {
  const auto l = pair_lambda({1, 4});
  const auto zero = minimal_dilation(RowTuple::zero(l, 1));
  CHECK(zero.kernel.defect_dim() == 1);
  CHECK(zero.span_ok);
  CHECK(zero.span_degree == zero.kernel.degree());

  const auto jr = minimal_dilation(jordan(2), {}, 4);
  CHECK(jr.compression_residual < 1e-15);
  CHECK(jr.coinvariance_residual < 1e-15);
  CHECK(jr.span_ok);
  CHECK((jr.dilation_operator(1, 1) - jr.kernel.model->shift(1, 1)).norm() == 0.0);

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_nilpotent_member(l, rng);
    const auto rec = minimal_dilation(t);
    CHECK(rec.compression_residual <= 1e-10);
    CHECK(rec.coinvariance_residual <= 1e-10);
    CHECK(rec.span_ok);
  }
}

TEST_CASE("Brehmer moments") {
  Rng rng(14);
  for (const auto& l : {pair_lambda({1, 4}), pair_lambda({1, 2})}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto t = random_nilpotent_member(l, rng);
      const auto rep = moment_check(t, 3);
      CHECK(rep.exact);
      CHECK(rep.moments == 25);
      CHECK(rep.pass);
      CHECK(rep.samples[0].dilation_residual <= 1e-9);
    }
  }
  const auto torus = RowTuple(pair_lambda({1, 4}), {{clock_matrix(4)}, {shift_matrix(4)}});
  const auto rep = moment_check(torus, 2);
  CHECK_FALSE(rep.exact);
  CHECK(rep.pass);
  CHECK(rep.trend_decreasing);
  const auto lb = validate_lambda({2, 1}, std::vector<LambdaEntry>{{1, 2, 1, 1, {1, 4}}});
  CHECK_THROWS_AS(moment_check(RowTuple::zero(lb, 2), 1), RejectionError);
}
