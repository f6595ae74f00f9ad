#include "doctest.h"

#include <memory>

#include "polyball/beurling.hpp"
#include "polyball/errors.hpp"
#include "polyball/samplers.hpp"

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

std::shared_ptr<const TruncatedModel> model(const PhaseMatrix& l, int d) { return std::make_shared<TruncatedModel>(l, d); }

Matrix unit(std::size_t n, std::size_t j) {
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(n), 1);
  v(static_cast<Eigen::Index>(j), 0) = 1.0;
  return v;
}

// Coordinate vectors of the basis words with total degree in [lo, hi].
Matrix degree_band(const TruncatedModel& m, int lo, int hi) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    const int d = m.basis()[j].total_degree();
    if (d >= lo && d <= hi) idx.push_back(j);
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) out(static_cast<Eigen::Index>(idx[c]), static_cast<Eigen::Index>(c)) = 1.0;
  return out;
}

}  // namespace

TEST_CASE("co-invariant span identity") {
  const auto m = model(cfg_a(), 3);
  const auto vac = SubspaceHandle::from_vectors(m, 1, unit(m->dim(), 0));
  const auto rep = coinvariant_span(vac);
  CHECK(rep.wandering.cols() == 1);
  CHECK(rep.span_dim == static_cast<int>(m->dim()));
  CHECK(rep.pass);

  const auto k = berezin_kernel(RowTuple(PhaseMatrix::trivial({1}), {{jordan_matrix(3)}}));
  const auto range = SubspaceHandle::from_vectors(k.model, k.defect_dim(), k.matrix);
  const auto jr = coinvariant_span(range);
  CHECK(jr.wandering.cols() == 1);
  CHECK(jr.pass);

  const auto idx = m->index_of(parse_multiword("1|e", m->n()));
  try {
    coinvariant_span(SubspaceHandle::from_vectors(m, 1, unit(m->dim(), *idx)));
    FAIL("expected rejection");
  } catch (const RejectionError& e) {
    CHECK(std::string(e.what()).find("S*_{1,1}") != std::string::npos);
  }
}

TEST_CASE("random co-invariant subspaces satisfy the span identity") {
  Rng rng(11);
  for (const auto& l : {cfg_a(), cfg_b()}) {
    const auto m = model(l, 3);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t aux = static_cast<std::size_t>(rng.integer(1, 2));
      const Matrix seeds = rng.gaussian(static_cast<int>(m->dim() * aux), rng.integer(1, 2));
      const auto h = SubspaceHandle::from_vectors(m, aux, coinvariant_closure(*m, seeds, aux));
      CHECK(coinvariance_violation(h).residual < 1e-10);
      CHECK(coinvariant_span(h).pass);
    }
  }
}

TEST_CASE("Beurling conditions on the examples") {
  const auto l = cfg_a();
  const int d = 4;
  const auto m = model(l, d);
  const auto n = static_cast<Eigen::Index>(m->dim());

  // l2 (x) L for a line L in C^2: Delta(P_M) = P_C (x) P_L
  Vector line(2);
  line << cplx(0.6, 0.0), cplx(0.0, 0.8);
  const Matrix pl = line * line.adjoint();
  const auto full = SubspaceHandle::from_vectors(m, 2, linalg::kron(Matrix::Identity(n, n), Matrix(line)));
  const auto rep = beurling_conditions(full, 2);
  CHECK(rep.is_beurling);
  const Matrix delta = shift_defect(*m, 2, full.projection());
  const Matrix want = linalg::kron(unit(m->dim(), 0) * unit(m->dim(), 0).adjoint(), pl);
  CHECK((delta - want).norm() < 1e-12);

  // classical shift-invariant subspace
  const auto one = model(PhaseMatrix::trivial({1}), d);
  const auto rs = SubspaceHandle::from_vectors(one, 1, degree_band(*one, 1, d));
  const auto r1 = beurling_conditions(rs, 2);
  CHECK(r1.is_beurling);
  const Matrix d1 = shift_defect(*one, 1, rs.projection());
  CHECK((d1 - unit(one->dim(), 1) * unit(one->dim(), 1).adjoint()).norm() < 1e-12);

  // span{deg >= 1} in CFG-A: invariant, defect -1 at chi_(1,1), not doubly
  const auto bad = SubspaceHandle::from_vectors(m, 1, degree_band(*m, 1, d));
  const auto rb = beurling_conditions(bad, 2);
  CHECK(rb.invariance < 1e-12);
  CHECK(std::abs(rb.defect_min_eigenvalue + 1.0) < 1e-12);
  CHECK_FALSE(rb.positive);
  CHECK(std::abs(rb.doubly_residual - 1.0) < 1e-12);
  CHECK_FALSE(rb.doubly);
  CHECK_FALSE(rb.is_beurling);

  CHECK_THROWS_AS(beurling_conditions(bad, 1), RejectionError);
  const auto vac = SubspaceHandle::from_vectors(m, 1, unit(m->dim(), 0));
  CHECK_THROWS_AS(beurling_conditions(vac, 2), RejectionError);  // not invariant
}

TEST_CASE("right shifts are multi-analytic isometries") {
  for (const auto& l : {cfg_a(), cfg_b()}) {
    const int d = 4;
    const TruncatedModel m(l, d);
    const auto inner = m.interior(1);
    for (int i = 1; i <= 2; ++i) {
      for (int s = 1; s <= l.arity(i); ++s) {
        const Matrix r = right_shift(m, i, s);
        CHECK(linalg::spectral_norm(linalg::columns(r.adjoint() * r, inner) - linalg::columns(Matrix::Identity(r.rows(), r.cols()), inner)) < 1e-14);
        for (int j = 1; j <= 2; ++j) {
          for (int t = 1; t <= l.arity(j); ++t) {
            CHECK(linalg::spectral_norm(r * m.shift(j, t) - m.shift(j, t) * r) < 1e-14);
          }
        }
      }
    }
  }
}

TEST_CASE("factorization of simple Y") {
  const int d = 4;
  const auto m = model(cfg_a(), d);
  const auto n = static_cast<Eigen::Index>(m->dim());
  const auto f = beurling_factorize(m, 1, Matrix::Identity(n, n));
  CHECK(f.factor_residual < 1e-10);
  CHECK(f.analytic_residual < 1e-10);
  CHECK(linalg::spectral_norm(f.a * f.a.adjoint() - Matrix::Identity(n, n)) < 1e-10);

  const auto one = model(PhaseMatrix::trivial({1}), d);
  const Matrix q = degree_band(*one, 1, d);
  const Matrix pm = q * q.adjoint();
  const auto g = beurling_factorize(one, 1, pm);
  CHECK(g.factor_residual < 1e-10);
  CHECK(g.analytic_residual < 1e-10);
  const Matrix aa = g.a.adjoint() * g.a;
  CHECK(linalg::spectral_norm(aa * aa - aa) < 1e-10);              // partial isometry
  CHECK(linalg::spectral_norm(g.a - pm * g.a) < 1e-10);            // range inside M
  CHECK(linalg::numerical_rank(g.a) == static_cast<std::size_t>(q.cols()));

  const Matrix bad = degree_band(*m, 1, d);
  try {
    beurling_factorize(m, 1, bad * bad.adjoint());
    FAIL("expected rejection");
  } catch (const RejectionError& e) {
    CHECK(std::string(e.what()).find("condition (ii)") != std::string::npos);
  }
}

TEST_CASE("planted inner functions: conditions and factorization") {
  Rng rng(99);
  const Tolerances tol;
  for (int trial = 0; trial < 12; ++trial) {
    const auto l = trial % 2 ? cfg_b() : cfg_a();
    const auto m = model(l, 4);
    const auto p = random_inner(*m, rng);
    CAPTURE(trial);
    // Psi commutes with S (x) I and is isometric on the interior
    const auto in_shifts = ambient_shifts(*m, p.in_aux);
    const auto out_shifts = ambient_shifts(*m, p.out_aux);
    const auto cols = tensor_interior(*m, p.in_aux, 4 - p.shift_degree);
    for (int i = 1; i <= 2; ++i) {
      for (int s = 1; s <= l.arity(i); ++s) {
        CHECK(linalg::spectral_norm(p.psi * in_shifts.op(i, s) - out_shifts.op(i, s) * p.psi) < 1e-12);
      }
    }
    const Matrix gram = p.psi.adjoint() * p.psi;
    CHECK(linalg::spectral_norm(linalg::submatrix(gram, cols, cols) - Matrix::Identity(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(cols.size()))) < 1e-12);

    const auto range = SubspaceHandle::from_vectors(m, p.out_aux, p.psi);
    CHECK(beurling_conditions(range, 2).is_beurling);

    const Matrix y = p.psi * p.psi.adjoint();
    const auto f = beurling_factorize(m, p.out_aux, y, tol);
    CHECK(f.factor_residual < 1e-8);
    CHECK(f.analytic_residual < 1e-8);
    CHECK(f.coordinate_residual < 1e-8);
    const auto inner = tensor_interior(*m, p.out_aux, 2);
    const Matrix back = shift_defect(*m, p.out_aux, f.a * f.a.adjoint());
    CHECK(linalg::min_eigenvalue(linalg::submatrix(back, inner, inner)) >= -10 * tol.eigen);
  }
}

TEST_CASE("compression models") {
  const auto l = cfg_a();
  const auto m = model(l, 3);
  const auto n = static_cast<Eigen::Index>(m->dim());
  const auto whole = compression_model(SubspaceHandle::from_vectors(m, 1, Matrix::Identity(n, n)));
  CHECK((whole.tuple.op(1, 1) - m->shift(1, 1)).norm() < 1e-14);
  CHECK((whole.tuple.op(2, 1) - m->shift(2, 1)).norm() < 1e-14);
  CHECK(whole.defect_rank == 1);
  CHECK(whole.rank_matches);
  CHECK(whole.membership.is_member);

  const auto vac = compression_model(SubspaceHandle::from_vectors(m, 1, unit(m->dim(), 0)));
  CHECK(vac.tuple.op(1, 1).norm() == 0.0);
  CHECK(vac.defect_rank == 1);
  CHECK(vac.rank_matches);
}

TEST_CASE("model round trip reproduces mixed moments") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto l = trial % 2 ? cfg_b() : cfg_a();
    const auto t = random_nilpotent_member(l, rng);
    const auto k = berezin_kernel(t);
    const auto h = SubspaceHandle::from_vectors(k.model, k.defect_dim(), k.matrix);
    const auto c = compression_model(h);
    CHECK(c.membership.is_member);
    CHECK(c.membership.purity.is_pure);
    CHECK(c.rank_matches);
    const Matrix u = h.basis.adjoint() * k.matrix;  // M in the K-frame
    for (int len = 1; len <= 3; ++len) {
      for (int rep = 0; rep < 6; ++rep) {
        const auto w = random_word(l, rng, len);
        const Matrix a = evaluate_word(w, t.dim(), [&](int i, int s) -> const Matrix& { return t.op(i, s); });
        const Matrix b = evaluate_word(w, c.tuple.dim(), [&](int i, int s) -> const Matrix& { return c.tuple.op(i, s); });
        CHECK(linalg::spectral_norm(u * a * u.adjoint() - b) < 1e-9);
      }
    }
  }
}

TEST_CASE("rank-one compressions of distinct subspaces are told apart") {
  Rng rng(3);
  const auto m = model(cfg_a(), 3);
  int inconclusive = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix s1 = rng.gaussian(static_cast<int>(m->dim()), 1);
    const Matrix s2 = rng.gaussian(static_cast<int>(m->dim()), 1);
    const auto a = SubspaceHandle::from_vectors(m, 1, coinvariant_closure(*m, s1, 1));
    const auto b = SubspaceHandle::from_vectors(m, 1, coinvariant_closure(*m, s2, 1));
    CHECK(compare_compressions(a, a) == Verdict::Equivalent);
    const auto v = compare_compressions(a, b);
    CHECK(v != Verdict::Equivalent);
    inconclusive += v == Verdict::Inconclusive;
  }
  CHECK(inconclusive == 0);
}
