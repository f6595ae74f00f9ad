#include "doctest.h"

#include <algorithm>
#include <complex>
#include <numbers>

#include "polyball/errors.hpp"
#include "polyball/fockmodel.hpp"
#include "polyball/linalg.hpp"
#include "polyball/wold.hpp"

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

PieceSpec shift_piece(std::vector<int> a, int w = 1) {
  PieceSpec p;
  p.shifts = std::move(a);
  p.wandering_dim = w;
  return p;
}

PieceSpec torus_piece() {
  PieceSpec p;
  p.wandering_dim = 4;
  p.unitaries = {{1, clock_matrix(4)}, {2, shift_matrix(4)}};
  return p;
}

int rank(const Matrix& m, const std::vector<std::size_t>& cols) {
  Matrix sel(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) sel.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(cols[j]));
  return static_cast<int>(linalg::orthonormal_range(sel).cols());
}

// Brute force over sums of eigenspaces of a generic Hermitian element: a
// reducing subspace of {U_j} is spanned by eigenvectors of any Hermitian
// element of the generated algebra.
bool has_proper_reducing_subspace(const std::vector<Matrix>& us, Rng& rng) {
  const auto n = us.front().rows();
  Matrix h = Matrix::Zero(n, n);
  for (const auto& u : us) {
    h += rng.uniform() * (u + u.adjoint());
    h += rng.uniform() * cplx(0, 1) * (u - u.adjoint());
    for (const auto& v : us) h += rng.uniform() * (u * v + (u * v).adjoint());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Matrix& ev = es.eigenvectors();
  for (std::uint32_t sub = 1; sub + 1 < (1u << n); ++sub) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index c = 0; c < n; ++c) {
      if ((sub >> c) & 1u) idx.push_back(c);
    }
    Matrix q(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = ev.col(idx[c]);
    bool invariant = true;
    for (const auto& u : us) {
      const Matrix uq = u * q;
      if ((uq - q * (q.adjoint() * uq)).norm() > 1e-8) invariant = false;
    }
    if (invariant) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("standard pair piece is the truncated Fock model") {
  const auto l = cfg_a();
  const auto a = assemble(l, {{shift_piece({1, 2})}}, 2);
  const TruncatedModel model(l, 2);
  REQUIRE(a.tuple.dim() == 6);
  CHECK((a.tuple.op(1, 1) - model.shift(1, 1)).norm() == 0.0);
  CHECK((a.tuple.op(2, 1) - model.shift(2, 1)).norm() == 0.0);

  const auto b = cfg_b();
  const auto ab = assemble(b, {{shift_piece({1, 2}, 2)}}, 3);
  const TruncatedModel mb(b, 3);
  for (const auto& [i, s] : {std::pair{1, 1}, {1, 2}, {2, 1}}) {
    CHECK((ab.tuple.op(i, s) - linalg::kron(mb.shift(i, s), Matrix::Identity(2, 2))).norm() == 0.0);
  }
}

TEST_CASE("torus piece and mixed A={1} piece") {
  const auto l = cfg_a();
  const auto t = assemble(l, {{torus_piece()}}, 3);
  REQUIRE(t.tuple.dim() == 4);
  CHECK((t.tuple.op(1, 1) - clock_matrix(4)).norm() == 0.0);
  CHECK((t.tuple.op(2, 1) - shift_matrix(4)).norm() == 0.0);

  PieceSpec p = shift_piece({1}, 4);
  p.unitaries = {{2, shift_matrix(4)}};
  const int d = 3;
  const auto m = assemble(l, {{p}}, d);
  REQUIRE(m.tuple.dim() == 16);
  Matrix s = Matrix::Zero(d + 1, d + 1);
  Matrix ph = Matrix::Zero(d + 1, d + 1);
  for (int q = 0; q <= d; ++q) {
    if (q < d) s(q + 1, q) = 1.0;
    ph(q, q) = std::pow(cplx(0, -1), q);  // lambda_21 = -i
  }
  CHECK((m.tuple.op(1, 1) - linalg::kron(s, Matrix::Identity(4, 4))).norm() < 1e-15);
  CHECK((m.tuple.op(2, 1) - linalg::kron(ph, shift_matrix(4))).norm() < 1e-14);
}

TEST_CASE("spec validation") {
  const auto l = cfg_a();
  PieceSpec bad = torus_piece();
  bad.unitaries[2] = clock_matrix(4);
  CHECK_THROWS_AS(validate_spec(l, {{bad}}), ConfigError);
  try {
    validate_spec(cfg_b(), {{torus_piece()}});
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("n_1 = 2") != std::string::npos);
    CHECK(e.pointer() == "/pieces/0/A");
  }
  PieceSpec nonunitary = torus_piece();
  nonunitary.unitaries[1] = 2.0 * clock_matrix(4);
  CHECK_THROWS_AS(validate_spec(l, {{nonunitary}}), ConfigError);
  CHECK_THROWS_AS(validate_spec(l, {{shift_piece({2, 1})}}), ConfigError);
  CHECK_THROWS_AS(validate_spec(l, {{shift_piece({1}, 1)}}), ConfigError);  // missing U_2
}

TEST_CASE("projections of the basic examples") {
  const auto l = cfg_a();
  const auto pure = assemble(l, {{shift_piece({1, 2})}}, 3);
  const auto wp = wold_projections(pure);
  CHECK(wp.pass);
  const auto in = pure.interior(1);
  for (const auto& [mask, p] : wp.subsets) {
    const double want = mask == 3u ? 1.0 : 0.0;
    for (auto j : in) {
      CHECK(std::abs(p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) - want) < 1e-12);
    }
  }

  const auto torus = assemble(l, {{torus_piece()}}, 3);
  const auto wt = wold_projections(torus);
  CHECK(wt.pass);
  CHECK((wt.subsets.at(0u) - Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(wt.subsets.at(3u).norm() < 1e-12);

  const int d = 3;
  const auto mixed = assemble(l, {{shift_piece({1, 2}, 2), torus_piece()}}, d);
  const auto wm = wold_projections(mixed);
  CHECK(wm.pass);
  const auto inner = mixed.interior(1);
  CHECK(rank(wm.subsets.at(3u), inner) == static_cast<int>(basis_size(std::vector<int>{1, 1}, d - 1)) * 2);
  CHECK(rank(wm.subsets.at(0u), inner) == 4);
  CHECK(rank(wm.subsets.at(1u), inner) == 0);
  CHECK(rank(wm.subsets.at(2u), inner) == 0);

  // Delta_V(I) = P_C (x) I_2 on the shift piece, 0 on the torus
  const auto n = static_cast<Eigen::Index>(mixed.tuple.dim());
  Matrix delta = Matrix::Identity(n, n);
  for (int i = 1; i <= 2; ++i) delta = delta - phi_map(mixed.tuple, i, delta);
  CHECK(rank(delta, inner) == 2);
}

TEST_CASE("non-doubly tuples are rejected") {
  const auto l = cfg_a();
  auto a = assemble(l, {{shift_piece({1, 2})}}, 3);
  a.tuple.op(2, 1) = a.tuple.op(2, 1) + 0.1 * a.tuple.op(1, 1).adjoint();
  CHECK_THROWS_AS(wold_projections(a), RejectionError);
}

TEST_CASE("wandering data of the examples") {
  const auto l = cfg_a();
  const auto w = wandering_data(assemble(l, {{shift_piece({1, 2})}}, 3));
  const auto& top = w.blocks.at(3u);
  CHECK(top.dim == 1);
  CHECK(std::abs(std::abs(top.basis(0, 0)) - 1.0) < 1e-12);  // chi_empty
  CHECK(top.kernel < 1e-12);
  for (std::uint32_t m : {0u, 1u, 2u}) CHECK(w.blocks.at(m).dim == 0);

  PieceSpec p = shift_piece({1}, 4);
  p.unitaries = {{2, shift_matrix(4)}};
  const auto wx = wandering_data(assemble(l, {{p}}, 3));
  const auto& one = wx.blocks.at(1u);
  REQUIRE(one.dim == 4);
  CHECK(one.kernel < 1e-12);
  CHECK(one.invariance < 1e-12);
  CHECK(one.unitarity < 1e-12);
  // unitarily equal to X_4: same spectrum and same Gram-free invariants
  CHECK(equivalence_check(wx, planted_data(l, {{p}})).verdict == Verdict::Equivalent);
}

TEST_CASE("equivalence verdicts") {
  const auto l = cfg_a();
  PieceSpec px = shift_piece({1}, 4);
  px.unitaries = {{2, shift_matrix(4)}};
  PieceSpec pc = px;
  pc.unitaries = {{2, clock_matrix(4)}};
  const auto wx = planted_data(l, {{px}});
  CHECK(equivalence_check(wx, planted_data(l, {{pc}})).verdict == Verdict::Equivalent);
  CHECK(equivalence_check(wx, wx).verdict == Verdict::Equivalent);

  PieceSpec p3 = px;
  p3.unitaries = {{2, clock_matrix(4, 2)}};  // spectrum {1,-1,1,-1}
  CHECK(equivalence_check(wx, planted_data(l, {{p3}})).verdict == Verdict::NotEquivalent);

  const auto two = planted_data(l, {{shift_piece({1, 2}, 2)}});
  const auto three = planted_data(l, {{shift_piece({1, 2}, 3)}});
  const auto rep = equivalence_check(two, three);
  CHECK(rep.verdict == Verdict::NotEquivalent);
  CHECK(rep.per_subset.at(3u) == Verdict::NotEquivalent);
  CHECK(rep.per_subset.at(0u) == Verdict::Equivalent);

  const auto torus = planted_data(l, {{torus_piece()}});
  CHECK(equivalence_check(torus, torus).verdict == Verdict::Inconclusive);
  PieceSpec swapped = torus_piece();
  swapped.unitaries = {{1, std::polar(1.0, std::numbers::pi / 4) * clock_matrix(4)}, {2, shift_matrix(4)}};  // U^4 = -I
  CHECK(equivalence_check(torus, planted_data(l, {{swapped}})).verdict == Verdict::NotEquivalent);
}

TEST_CASE("random round trips") {
  Rng rng(20240611);
  for (int trial = 0; trial < 40; ++trial) {
    const auto r = random_spec(rng);
    CAPTURE(spec_to_json(r.spec).dump());
    CAPTURE(r.degree);
    const auto a = assemble(r.lambda, r.spec, r.degree);
    const auto proj = wold_projections(a);
    CHECK(proj.pass);
    const auto got = wandering_data(a);
    const auto want = planted_data(r.lambda, r.spec);
    for (const auto& [mask, blk] : want.blocks) {
      CHECK(got.blocks.at(mask).dim == blk.dim);
      CHECK(got.blocks.at(mask).kernel < 1e-10);
      CHECK(got.blocks.at(mask).invariance < 1e-10);
    }
    CHECK(equivalence_check(got, want).verdict != Verdict::NotEquivalent);

    // piece order does not change the wandering dimensions
    auto perm = r.spec;
    std::reverse(perm.pieces.begin(), perm.pieces.end());
    const auto gp = wandering_data(assemble(r.lambda, perm, r.degree));
    for (const auto& [mask, blk] : got.blocks) CHECK(gp.blocks.at(mask).dim == blk.dim);

    // each piece sits under the projections of its own type
    const auto inner = a.interior(1);
    for (const auto& lay : a.pieces) {
      const auto n = static_cast<Eigen::Index>(a.tuple.dim());
      Matrix piece = Matrix::Zero(n, n);
      for (std::size_t j = lay.offset; j < lay.offset + lay.dim; ++j) piece(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
      for (std::size_t i = 0; i < a.tuple.k(); ++i) {
        const Matrix& side = (lay.mask >> i) & 1u ? proj.shift_part[i] : proj.cuntz_part[i];
        double res = 0.0;
        for (auto j : inner) {
          const auto c = static_cast<Eigen::Index>(j);
          res = std::max(res, (piece * side.col(c) - piece.col(c)).norm());
        }
        CHECK(res < 1e-10);
      }
    }
  }
}

TEST_CASE("irreducible wandering unitaries give a single nonzero subset") {
  auto ops = [](const RowTuple& t) {
    std::vector<Matrix> out;
    for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
      for (int s = 1; s <= t.lambda().arity(i); ++s) out.push_back(t.op(i, s));
    }
    return out;
  };
  const auto l = cfg_a();
  Rng rng(7);
  REQUIRE_FALSE(has_proper_reducing_subspace({clock_matrix(4), shift_matrix(4)}, rng));
  for (const auto& spec : {TupleSpec{{torus_piece()}}, TupleSpec{{shift_piece({1, 2})}}}) {
    const auto a = assemble(l, spec, 2);
    const auto w = wandering_data(a);
    int nonzero = 0;
    for (const auto& [mask, blk] : w.blocks) nonzero += blk.dim > 0;
    CHECK(nonzero == 1);
    CHECK(linalg::commutant_dimension(ops(a.tuple)) == 1);
  }

  // reducible control
  const auto trivial = PhaseMatrix::trivial({1, 1});
  PieceSpec diag;
  diag.wandering_dim = 2;
  Matrix u1 = Matrix::Identity(2, 2);
  u1(1, 1) = -1.0;
  diag.unitaries = {{1, u1}, {2, Matrix::Identity(2, 2)}};
  CHECK(has_proper_reducing_subspace({u1, Matrix::Identity(2, 2)}, rng));
  CHECK(linalg::commutant_dimension(ops(assemble(trivial, {{diag}}, 2).tuple)) == 2);
}
