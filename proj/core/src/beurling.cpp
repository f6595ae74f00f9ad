#include "polyball/beurling.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "polyball/errors.hpp"

namespace polyball {

namespace {

std::vector<std::size_t> ambient_interior(const TruncatedModel& model, std::size_t aux, int max_degree) {
  if (max_degree < 0) return {};
  return tensor_interior(model, aux, max_degree);
}

// Orthonormal basis of {x : a x = 0}.
Matrix null_space(const Matrix& a, std::size_t cols, double tol = 1e-10) {
  const auto n = static_cast<Eigen::Index>(cols);
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * scale) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// M restricted to total degree <= max_degree, as orthonormal columns of the ambient space.
Matrix low_part(const SubspaceHandle& m, int max_degree) {
  const auto keep = ambient_interior(*m.model, m.aux, max_degree);
  std::vector<bool> low(m.ambient(), false);
  for (auto j : keep) low[j] = true;
  std::vector<std::size_t> high;
  for (std::size_t j = 0; j < low.size(); ++j) {
    if (!low[j]) high.push_back(j);
  }
  std::vector<std::size_t> all(m.dim());
  std::iota(all.begin(), all.end(), 0);
  const Matrix rows = linalg::submatrix(m.basis, high, all);
  return m.basis * null_space(rows, m.dim());
}

Matrix restrict_square(const Matrix& a, const std::vector<std::size_t>& idx) { return linalg::submatrix(a, idx, idx); }

}  // namespace

SubspaceHandle SubspaceHandle::from_vectors(std::shared_ptr<const TruncatedModel> model, std::size_t aux,
                                            const Matrix& vectors) {
  SubspaceHandle h;
  h.aux = aux;
  if (static_cast<std::size_t>(vectors.rows()) != model->dim() * aux) {
    throw UsageError("subspace vectors have " + std::to_string(vectors.rows()) + " coordinates, expected " +
                     std::to_string(model->dim() * aux));
  }
  h.model = std::move(model);
  if (vectors.cols() > 0) {
    Eigen::JacobiSVD<Matrix> svd(vectors);
    const auto& sv = svd.singularValues();
    h.conditioning = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  }
  h.basis = linalg::orthonormal_range(vectors);
  return h;
}

RowTuple ambient_shifts(const TruncatedModel& model, std::size_t aux) {
  const auto id = Matrix::Identity(static_cast<Eigen::Index>(aux), static_cast<Eigen::Index>(aux));
  std::vector<std::vector<Matrix>> ops(model.k());
  for (int i = 1; i <= static_cast<int>(model.k()); ++i) {
    for (int s = 1; s <= model.lambda().arity(i); ++s) {
      ops[static_cast<std::size_t>(i - 1)].push_back(linalg::kron(model.shift(i, s), id));
    }
  }
  return RowTuple(model.lambda(), std::move(ops));
}

Matrix shift_defect(const TruncatedModel& model, std::size_t aux, const Matrix& y) {
  const auto s = ambient_shifts(model, aux);
  Matrix out = y;
  for (int i = 1; i <= static_cast<int>(s.k()); ++i) out = out - phi_map(s, i, out);
  return out;
}

Violation coinvariance_violation(const SubspaceHandle& m) {
  Violation v;
  const auto& q = m.basis;
  for (int i = 1; i <= static_cast<int>(m.model->k()); ++i) {
    for (int s = 1; s <= m.model->lambda().arity(i); ++s) {
      const Matrix x = apply_tensor(m.model->letter_operator(Letter::adj(i, s)), q, m.aux);
      const double r = linalg::spectral_norm(x - q * (q.adjoint() * x));
      if (r > v.residual) v = {r, i, s};
    }
  }
  return v;
}

namespace {

void require_coinvariant(const SubspaceHandle& m, double tol, const char* where) {
  const auto v = coinvariance_violation(m);
  if (v.residual > tol) {
    throw RejectionError(std::string(where) + ": subspace is not co-invariant: S*_{" + std::to_string(v.block) + "," +
                         std::to_string(v.letter) + "} maps it outside itself (residual " +
                         std::to_string(v.residual) + ")");
  }
}

}  // namespace

SpanReport coinvariant_span(const SubspaceHandle& m, double tol) {
  require_coinvariant(m, tol, "coinvariant_span");
  const auto& model = *m.model;
  const auto aux = static_cast<Eigen::Index>(m.aux);
  SpanReport rep;
  rep.wandering = linalg::orthonormal_range(m.basis.topRows(aux));
  const int steps = model.degree() + static_cast<int>(model.k());
  const Matrix span = generated_span(model, m.basis, m.aux, steps);
  rep.span_dim = static_cast<int>(span.cols());
  const Matrix off = Matrix::Identity(aux, aux) - rep.wandering * rep.wandering.adjoint();
  const auto dim = static_cast<Eigen::Index>(model.dim());
  rep.containment = span.cols() ? linalg::spectral_norm(linalg::kron(Matrix::Identity(dim, dim), off) * span) : 0.0;
  rep.contained_degree = rep.wandering.cols() ? contained_degree(model, span, rep.wandering, m.aux, tol) : model.degree();
  rep.pass = rep.containment <= tol && rep.contained_degree == model.degree() &&
             static_cast<std::size_t>(rep.span_dim) == model.dim() * static_cast<std::size_t>(rep.wandering.cols());
  return rep;
}

nlohmann::json SpanReport::to_json() const {
  return {{"wandering_dim", wandering.cols()},
          {"span_dim", span_dim},
          {"containment_residual", containment},
          {"contained_degree", contained_degree},
          {"pass", pass}};
}

BeurlingConditions beurling_conditions(const SubspaceHandle& m, int buffer, const Tolerances& tol) {
  const auto& model = *m.model;
  const int d = model.degree();
  if (buffer < 2 || buffer > d) {
    throw RejectionError("beurling_conditions: buffer " + std::to_string(buffer) +
                         " is insufficient; need 2 <= b <= D = " + std::to_string(d));
  }
  BeurlingConditions rep;
  rep.buffer = buffer;
  const auto s = ambient_shifts(model, m.aux);
  const Matrix& q = m.basis;
  const Matrix low = low_part(m, d - buffer);
  for (int i = 1; i <= static_cast<int>(s.k()); ++i) {
    for (int t = 1; t <= s.lambda().arity(i); ++t) {
      const Matrix x = s.op(i, t) * low;
      rep.invariance = std::max(rep.invariance, linalg::spectral_norm(x - q * (q.adjoint() * x)));
    }
  }
  if (rep.invariance > tol.eigen) {
    throw RejectionError("beurling_conditions: subspace is not invariant below degree " + std::to_string(d - buffer + 1) +
                         " (residual " + std::to_string(rep.invariance) + ")");
  }

  const auto inner = ambient_interior(model, m.aux, d - buffer);
  const Matrix delta = shift_defect(model, m.aux, m.projection());
  rep.defect_min_eigenvalue = inner.empty() ? 0.0 : linalg::min_eigenvalue(restrict_square(delta, inner));
  rep.positive = rep.defect_min_eigenvalue >= -tol.eigen;

  std::vector<std::vector<Matrix>> w(s.k());
  for (int i = 1; i <= static_cast<int>(s.k()); ++i) {
    for (int t = 1; t <= s.lambda().arity(i); ++t) w[static_cast<std::size_t>(i - 1)].push_back(q.adjoint() * s.op(i, t) * q);
  }
  const Matrix coords = q.adjoint() * low;
  for (int i = 1; i <= static_cast<int>(s.k()); ++i) {
    for (int j = 1; j <= static_cast<int>(s.k()); ++j) {
      if (i == j) continue;
      for (int a = 1; a <= s.lambda().arity(i); ++a) {
        for (int b = 1; b <= s.lambda().arity(j); ++b) {
          const Matrix& wi = w[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(a - 1)];
          const Matrix& wj = w[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(b - 1)];
          const Matrix r = (wi.adjoint() * wj - s.lambda().lambda(i, j, a, b).conj().value() * wj * wi.adjoint()) * coords;
          rep.doubly_residual = std::max(rep.doubly_residual, linalg::spectral_norm(r));
        }
      }
    }
  }
  rep.doubly = rep.doubly_residual <= tol.eigen;
  rep.is_beurling = rep.positive && rep.doubly;
  return rep;
}

nlohmann::json BeurlingConditions::to_json() const {
  return {{"buffer", buffer},
          {"invariance_residual", invariance},
          {"defect_min_eigenvalue", defect_min_eigenvalue},
          {"doubly_residual", doubly_residual},
          {"positive", positive},
          {"doubly", doubly},
          {"is_beurling", is_beurling}};
}

Factorization beurling_factorize(std::shared_ptr<const TruncatedModel> model, std::size_t aux, const Matrix& y,
                                 const Tolerances& tol) {
  const auto n = model->dim() * aux;
  if (static_cast<std::size_t>(y.rows()) != n || static_cast<std::size_t>(y.cols()) != n) {
    throw UsageError("beurling_factorize: Y must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if ((y - y.adjoint()).norm() > tol.algebraic * std::max(1.0, y.norm())) {
    throw UsageError("beurling_factorize: Y is not Hermitian");
  }
  Factorization f;
  const int k = static_cast<int>(model->k());
  const auto inner = ambient_interior(*model, aux, model->degree() - k);
  const Matrix delta = shift_defect(*model, aux, y);
  f.defect_min_eigenvalue = inner.empty() ? 0.0 : linalg::min_eigenvalue(restrict_square(delta, inner));
  if (f.defect_min_eigenvalue < -tol.eigen) {
    throw RejectionError("beurling_factorize: condition (ii) fails, Delta(Y) has eigenvalue " +
                         std::to_string(f.defect_min_eigenvalue) + " on the interior");
  }

  const auto split = linalg::psd_split(y, tol.eigen);
  const Matrix r = split.root_coordinates();                 // Y^{1/2} in frame coordinates
  const RealVector inv = split.values.cwiseSqrt().cwiseInverse();
  const Matrix rplus = split.frame * inv.asDiagonal();      // right inverse of r on range(Y)
  const auto s = ambient_shifts(*model, aux);
  std::vector<std::vector<Matrix>> ops(s.k());
  for (int i = 1; i <= k; ++i) {
    for (int t = 1; t <= s.lambda().arity(i); ++t) {
      const Matrix sa = s.op(i, t).adjoint();
      const Matrix c = r * sa * rplus;
      f.coordinate_residual = std::max(f.coordinate_residual, linalg::spectral_norm(c * r - r * sa));
      ops[static_cast<std::size_t>(i - 1)].push_back(c.adjoint());
    }
  }
  f.tuple = RowTuple(model->lambda(), std::move(ops));
  if (f.tuple.dim() == 0) {
    f.domain = std::make_shared<TruncatedModel>(model->lambda(), 0);
    f.a = Matrix::Zero(static_cast<Eigen::Index>(n), 0);
    return f;
  }

  const auto kernel = berezin_kernel(f.tuple, tol);
  f.domain = kernel.model;
  f.domain_aux = kernel.defect_dim();
  f.a = r.adjoint() * kernel.matrix.adjoint();

  const Matrix gap = y - f.a * f.a.adjoint();
  f.factor_residual = inner.empty() ? 0.0 : linalg::spectral_norm(linalg::columns(gap, inner));
  const auto dom = ambient_interior(*f.domain, f.domain_aux, f.domain->degree() - 1);
  const auto ds = ambient_shifts(*f.domain, f.domain_aux);
  if (!dom.empty()) {
    for (int i = 1; i <= k; ++i) {
      for (int t = 1; t <= s.lambda().arity(i); ++t) {
        const Matrix res = f.a * ds.op(i, t) - s.op(i, t) * f.a;
        f.analytic_residual = std::max(f.analytic_residual, linalg::spectral_norm(linalg::columns(res, dom)));
      }
    }
  }
  return f;
}

nlohmann::json Factorization::to_json() const {
  return {{"rank", tuple.dim()},
          {"domain_degree", domain ? domain->degree() : 0},
          {"domain_aux", domain_aux},
          {"defect_min_eigenvalue", defect_min_eigenvalue},
          {"coordinate_residual", coordinate_residual},
          {"factor_residual", factor_residual},
          {"analytic_residual", analytic_residual}};
}

CompressionModel compression_model(const SubspaceHandle& m, const Tolerances& tol) {
  require_coinvariant(m, tol.eigen, "compression_model");
  const auto s = ambient_shifts(*m.model, m.aux);
  const Matrix& q = m.basis;
  std::vector<std::vector<Matrix>> ops(s.k());
  for (int i = 1; i <= static_cast<int>(s.k()); ++i) {
    for (int t = 1; t <= s.lambda().arity(i); ++t) ops[static_cast<std::size_t>(i - 1)].push_back(q.adjoint() * s.op(i, t) * q);
  }
  CompressionModel out;
  out.tuple = RowTuple(s.lambda(), std::move(ops));
  out.membership = check_membership(out.tuple, tol);
  out.defect_rank = out.tuple.dim() ? linalg::numerical_rank(defect(out.tuple)) : 0;
  out.wandering_dim = linalg::numerical_rank(q.topRows(static_cast<Eigen::Index>(m.aux)));
  out.rank_matches = out.defect_rank == out.wandering_dim;
  return out;
}

nlohmann::json CompressionModel::to_json() const {
  return {{"dim", tuple.dim()},
          {"membership", membership.to_json()},
          {"defect_rank", defect_rank},
          {"wandering_dim", wandering_dim},
          {"rank_matches", rank_matches}};
}

Verdict compare_compressions(const SubspaceHandle& a, const SubspaceHandle& b, double tol) {
  if (a.aux != 1 || b.aux != 1) throw UsageError("compare_compressions: scalar model subspaces only");
  if (a.dim() == b.dim() && (a.projection() - b.projection()).norm() <= tol) return Verdict::Equivalent;
  if (a.dim() != b.dim()) return Verdict::NotEquivalent;
  auto gens = [&](const SubspaceHandle& m) {
    const auto c = compression_model(m);
    std::vector<Matrix> g;
    for (int i = 1; i <= static_cast<int>(c.tuple.k()); ++i) {
      for (int s = 1; s <= c.tuple.lambda().arity(i); ++s) g.push_back(c.tuple.op(i, s));
    }
    return g;
  };
  return fingerprints_match(trace_fingerprint(gens(a), 4), trace_fingerprint(gens(b), 4), tol) ? Verdict::Inconclusive
                                                                                              : Verdict::NotEquivalent;
}

Matrix right_shift(const TruncatedModel& model, int block, int letter) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  Matrix out = Matrix::Zero(n, n);
  const auto& lambda = model.lambda();
  for (std::size_t c = 0; c < model.dim(); ++c) {
    MultiWord w = model.basis()[c];
    Phase ph;
    for (int j = block + 1; j <= static_cast<int>(model.k()); ++j) {
      for (int a : w.part(j).letters) ph *= lambda.lambda(j, block, a, letter);
    }
    w.part(block).letters.push_back(letter);
    const auto row = model.index_of(w);
    if (row) out(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(c)) = ph.value();
  }
  return out;
}

Matrix right_word(const TruncatedModel& model, const MultiWord& gamma) {
  const auto n = static_cast<Eigen::Index>(model.dim());
  Matrix out = Matrix::Identity(n, n);
  for (int i = 1; i <= static_cast<int>(gamma.blocks()); ++i) {
    for (int s : gamma.part(i).letters) out = right_shift(model, i, s) * out;
  }
  return out;
}

PlantedInner random_inner(const TruncatedModel& model, Rng& rng, int max_aux, int max_shift) {
  const int k = static_cast<int>(model.k());
  std::vector<int> profile(static_cast<std::size_t>(k), 0);
  const int total = rng.integer(0, max_shift);
  for (int q = 0; q < total; ++q) ++profile[static_cast<std::size_t>(rng.integer(0, k - 1))];

  std::set<MultiWord> gammas;
  const int wanted = rng.integer(1, 3);
  for (int attempt = 0; attempt < 4 * wanted && static_cast<int>(gammas.size()) < wanted; ++attempt) {
    auto g = MultiWord::empty(model.k());
    for (int i = 1; i <= k; ++i) {
      for (int q = 0; q < profile[static_cast<std::size_t>(i - 1)]; ++q) {
        g.part(i).letters.push_back(rng.integer(1, model.lambda().arity(i)));
      }
    }
    gammas.insert(std::move(g));
  }

  PlantedInner out;
  out.shift_degree = total;
  out.in_aux = static_cast<std::size_t>(rng.integer(1, max_aux));
  out.out_aux = static_cast<std::size_t>(rng.integer(1, max_aux));
  const auto count = gammas.size();
  while (count * out.out_aux < out.in_aux) ++out.out_aux;
  const auto e = static_cast<Eigen::Index>(out.in_aux);
  const auto kk = static_cast<Eigen::Index>(out.out_aux);
  const Matrix theta = rng.unitary(static_cast<int>(count * out.out_aux)).leftCols(e);
  const auto n = static_cast<Eigen::Index>(model.dim());
  out.psi = Matrix::Zero(n * kk, n * e);
  Eigen::Index j = 0;
  for (const auto& g : gammas) {
    out.psi += linalg::kron(right_word(model, g), theta.middleRows(j * kk, kk));
    ++j;
  }
  return out;
}

}  // namespace polyball
