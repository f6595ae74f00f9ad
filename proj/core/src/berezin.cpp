#include "polyball/berezin.hpp"

#include <algorithm>
#include <cmath>

#include "polyball/errors.hpp"

namespace polyball {

namespace {

void require_member(const RowTuple& t, const Tolerances& tol, const char* who) {
  const auto rep = check_membership(t, tol);
  if (!rep.is_member) {
    throw RejectionError(std::string(who) + ": tuple is not in the regular polyball " + rep.to_json().dump());
  }
}

// Smallest degree whose series tail (D+1)^{k-1} r^{2(D+1)} is below 1e-15,
// capped so the model stays desk-sized.
int degree_for_radius(const PhaseMatrix& lambda, double r) {
  int best = 1;
  for (int d = 1; d <= 400; ++d) {
    best = d;
    const double q = d + 1;
    double tail = std::pow(r, 2.0 * q);
    for (std::size_t i = 1; i < lambda.k(); ++i) tail *= q;
    if (tail < 1e-15) break;
    if (basis_size(lambda.n(), d + 1) > 30000) break;
  }
  return best;
}

MonomialOperator word_operator(const TruncatedModel& model, const LetterWord& word) {
  auto op = MonomialOperator::identity(model.dim());
  for (const auto& l : word) op = op.compose(model.letter_operator(l));
  return op;
}

}  // namespace

BerezinKernel berezin_kernel(const RowTuple& t, const Tolerances& tol, std::optional<int> degree) {
  require_member(t, tol, "berezin_kernel");
  const auto purity = check_pure(t, tol, std::max(64, 4 * degree.value_or(0)));
  if (!purity.is_pure) {
    throw RejectionError("berezin_kernel: tuple is not pure (||Phi^P(I)|| = " +
                         std::to_string(*std::max_element(purity.tail.begin(), purity.tail.end())) + ")");
  }
  BerezinKernel k;
  k.tuple = t;
  k.nilpotency = joint_nilpotency(t, tol.algebraic);
  const int deg = degree.value_or(k.nilpotency ? *k.nilpotency : 24);
  if (deg < 0) throw UsageError("berezin_kernel: degree must be >= 0");
  k.defect = linalg::psd_split(defect(t), tol.eigen);
  k.model = std::make_shared<const TruncatedModel>(t.lambda(), deg);

  const auto& model = *k.model;
  const auto n = static_cast<Eigen::Index>(t.dim());
  const auto r = static_cast<Eigen::Index>(k.defect_dim());
  const Matrix root = k.defect.root_coordinates();

  // tstar[b] = (T_{1,b1}...T_{k,bk})^*, built by peeling the leftmost letter of
  // the first nonempty block: T_w = T_{i,s} T_{w'}.
  std::vector<Matrix> tstar(model.dim());
  tstar[0] = Matrix::Identity(n, n);
  k.matrix.resize(static_cast<Eigen::Index>(model.dim()) * r, n);
  k.matrix.topRows(r) = root;
  for (std::size_t b = 1; b < model.dim(); ++b) {
    const auto& w = model.basis()[b];
    int i = 1;
    while (w.part(i).empty()) ++i;
    const int s = w.part(i).letters.front();
    const auto rest = *model.index_of(strip_leftmost(w, i));
    tstar[b] = tstar[rest] * t.op(i, s).adjoint();
    k.matrix.middleRows(static_cast<Eigen::Index>(b) * r, r) = root * tstar[b];
  }

  k.isometry_residual = linalg::spectral_norm(k.matrix.adjoint() * k.matrix - Matrix::Identity(n, n));
  for (int i = 1; i <= static_cast<int>(t.k()); ++i) {
    for (int s = 1; s <= t.lambda().arity(i); ++s) {
      const Matrix lhs = k.matrix * t.op(i, s).adjoint();
      const Matrix rhs = apply_tensor(model.letter_operator(Letter::adj(i, s)), k.matrix, k.defect_dim());
      k.intertwining_residual = std::max(k.intertwining_residual, linalg::spectral_norm(lhs - rhs));
    }
  }
  return k;
}

double series_identity_residual(const RowTuple& t, int d) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  Matrix x = defect(t);
  for (int i = static_cast<int>(t.k()); i >= 1; --i) {
    Matrix sum = x;
    Matrix term = x;
    for (int p = 1; p <= d; ++p) {
      term = phi_map(t, i, term);
      sum += term;
    }
    x = std::move(sum);
  }
  return linalg::spectral_norm(x - Matrix::Identity(n, n));
}

Matrix berezin_transform(const BerezinKernel& kernel, const StarPolynomial& f) {
  const auto fm = build_matrix(*kernel.model, f).matrix;
  return kernel.matrix.adjoint() * apply_kron(fm, kernel.matrix, kernel.defect_dim());
}

TransformReport berezin_transform(const RowTuple& t, const StarPolynomial& f, const std::vector<double>& rs,
                                  const Tolerances& tol) {
  require_member(t, tol, "berezin_transform");
  TransformReport rep;
  if (check_pure(t, tol).is_pure) {
    const auto kernel = berezin_kernel(t, tol);
    rep.value = berezin_transform(kernel, f);
    rep.direct_residual = linalg::spectral_norm(rep.value - t.evaluate(f));
    return rep;
  }
  if (rs.empty()) throw UsageError("berezin_transform: a non-pure tuple needs an r-sequence");
  std::optional<Matrix> prev;
  for (double r : rs) {
    if (!(r > 0.0 && r < 1.0)) throw UsageError("berezin_transform: r must lie in (0, 1)");
    const auto rt = t.scaled(r);
    const auto kernel = berezin_kernel(rt, tol, degree_for_radius(t.lambda(), r));
    Matrix value = berezin_transform(kernel, f);
    if (prev) rep.increments.emplace_back(r, linalg::spectral_norm(value - *prev));
    prev = value;
    rep.value = std::move(value);
  }
  return rep;
}

VnReport vn_check(const RowTuple& t, const StarPolynomial& f, std::optional<int> degree, const Tolerances& tol) {
  require_member(t, tol, "vn_check");
  const auto d = joint_nilpotency(t, tol.algebraic);
  if (!d) throw RejectionError("vn_check: tuple is not jointly nilpotent, the truncated bound is not certified");
  const int need = *d + f.creator_degree();
  VnReport rep;
  rep.degree = degree.value_or(need);
  if (rep.degree < need) {
    throw UsageError("vn_check: D' = " + std::to_string(rep.degree) + " is below d + m = " + std::to_string(need));
  }
  rep.lhs = linalg::spectral_norm(t.evaluate(f));
  const TruncatedModel model(t.lambda(), rep.degree);
  rep.rhs = linalg::spectral_norm(build_matrix(model, f).matrix);
  rep.pass = rep.lhs <= rep.rhs + tol.eigen;
  return rep;
}

Phase unimodular_phase(cplx z, std::int64_t max_modulus) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) {
    throw ConfigError("rescaling factor is not unimodular (|z| = " + std::to_string(std::abs(z)) + ")");
  }
  const auto p = Phase::from_complex(z, max_modulus);
  if (std::abs(p.value() - z) > 1e-9) throw ConfigError("rescaling factor is not a root of unity of small order");
  return p;
}

RowTuple rescale_tuple(const RowTuple& t, const PhaseMap& z) {
  auto out = t;
  for (const auto& [key, phase] : z) {
    const auto [i, s] = key;
    if (i < 1 || static_cast<std::size_t>(i) > t.k() || s < 1 || s > t.lambda().arity(i)) {
      throw UsageError("rescale_tuple: index (" + std::to_string(i) + "," + std::to_string(s) + ") out of range");
    }
    out.op(i, s) *= phase.value();
  }
  return out;
}

StarPolynomial rho(const StarPolynomial& f, const PhaseMap& z) {
  auto factor = [&](int i, int s) {
    auto it = z.find({i, s});
    return it == z.end() ? Phase{} : it->second;
  };
  StarPolynomial out(f.blocks());
  for (const auto& [key, c] : f.terms()) {
    Phase ph = c.phase;
    for (const auto& part : key.creators.parts) {
      for (int s : part.letters) ph *= factor(part.block, s);
    }
    for (const auto& part : key.annihilators.parts) {
      for (int s : part.letters) ph *= factor(part.block, s).conj();
    }
    out.add(key, {ph, c.scale});
  }
  return out;
}

double rescale_invariance_residual(const RowTuple& t, const PhaseMap& z, const StarPolynomial& f,
                                   const Tolerances& tol) {
  const auto lhs = berezin_transform(berezin_kernel(t, tol), rho(f, z));
  const auto rhs = berezin_transform(berezin_kernel(rescale_tuple(t, z), tol), f);
  return linalg::spectral_norm(lhs - rhs);
}

Matrix DilationRecord::dilation_operator(int block, int letter) const {
  const auto r = static_cast<Eigen::Index>(kernel.defect_dim());
  return linalg::kron(kernel.model->shift(block, letter), Matrix::Identity(r, r));
}

nlohmann::json DilationRecord::to_json() const {
  return {{"degree", kernel.degree()},
          {"defect_dim", kernel.defect_dim()},
          {"nilpotency", kernel.nilpotency ? nlohmann::json(*kernel.nilpotency) : nlohmann::json()},
          {"isometry_residual", kernel.isometry_residual},
          {"intertwining_residual", kernel.intertwining_residual},
          {"coinvariance_residual", coinvariance_residual},
          {"compression_residual", compression_residual},
          {"span_degree", span_degree},
          {"span_guarantee", span_guarantee},
          {"span_ok", span_ok}};
}

DilationRecord minimal_dilation(const RowTuple& t, const Tolerances& tol, std::optional<int> degree) {
  require_member(t, tol, "minimal_dilation");
  if (!check_pure(t, tol).is_pure) {
    throw RejectionError("minimal_dilation: tuple is not pure; verify dilation moments with moment_check instead");
  }
  const auto d = joint_nilpotency(t, tol.algebraic);
  const int k = static_cast<int>(t.k());
  DilationRecord rec{berezin_kernel(t, tol, degree.value_or(d ? *d + k + 1 : 24))};
  const auto& kern = rec.kernel;
  const auto& model = *kern.model;
  const auto r = kern.defect_dim();
  rec.coinvariance_residual = kern.intertwining_residual;
  for (int i = 1; i <= k; ++i) {
    for (int s = 1; s <= t.lambda().arity(i); ++s) {
      const Matrix vk = apply_tensor(model.letter_operator(Letter::S(i, s)), kern.matrix, r);
      rec.compression_residual =
          std::max(rec.compression_residual, linalg::spectral_norm(kern.matrix.adjoint() * vk - t.op(i, s)));
    }
  }
  const int top = d ? *d : kern.degree();
  const Matrix span = generated_span(model, kern.matrix, r, kern.degree() - top);
  const auto rr = static_cast<Eigen::Index>(r);
  rec.span_degree = contained_degree(model, span, Matrix::Identity(rr, rr), r);
  rec.span_guarantee = d ? kern.degree() - *d - k : -1;
  rec.span_ok = d ? rec.span_degree >= rec.span_guarantee : true;
  return rec;
}

nlohmann::json MomentReport::to_json() const {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& x : samples) {
    s.push_back({{"r", x.r},
                 {"degree", x.degree},
                 {"dilation_residual", x.dilation_residual},
                 {"distance_to_t", x.distance_to_t}});
  }
  return {{"exact", exact},       {"max_total", max_total}, {"moments", moments},
          {"samples", s},         {"trend_decreasing", trend_decreasing}, {"pass", pass}};
}

MomentReport moment_check(const RowTuple& t, int max_total, const Tolerances& tol, const std::vector<double>& rs) {
  for (int a : t.lambda().n()) {
    if (a != 1) throw RejectionError("moment_check: the Brehmer moments are stated for n_1 = ... = n_k = 1");
  }
  if (max_total < 0) throw UsageError("moment_check: max_total must be >= 0");
  require_member(t, tol, "moment_check");
  const int k = static_cast<int>(t.k());

  // every m in Z^k with sum |m_i| <= max_total, as letter words
  std::vector<LetterWord> words;
  std::vector<int> m(static_cast<std::size_t>(k), 0);
  auto emit = [&] {
    LetterWord w;
    for (int i = 1; i <= k; ++i) {
      for (int c = 0; c < std::max(-m[static_cast<std::size_t>(i - 1)], 0); ++c) w.push_back(Letter::S(i, 1));
    }
    for (int i = 1; i <= k; ++i) {
      for (int c = 0; c < std::max(m[static_cast<std::size_t>(i - 1)], 0); ++c) w.push_back(Letter::adj(i, 1));
    }
    words.push_back(std::move(w));
  };
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == k) {
      emit();
      return;
    }
    for (int v = -left; v <= left; ++v) {
      m[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, left - std::abs(v));
    }
  };
  rec(rec, 0, max_total);

  MomentReport rep;
  rep.max_total = max_total;
  rep.moments = words.size();
  auto sample = [&](const RowTuple& rt, double r, std::optional<int> degree) {
    const auto kernel = berezin_kernel(rt, tol, degree);
    MomentReport::Sample s{r, kernel.degree(), 0.0, 0.0};
    for (const auto& w : words) {
      const Matrix img = apply_tensor(word_operator(*kernel.model, w), kernel.matrix, kernel.defect_dim());
      const Matrix lhs = kernel.matrix.adjoint() * img;
      const Matrix want = rt.word(w);
      s.dilation_residual = std::max(s.dilation_residual, linalg::spectral_norm(lhs - want));
      s.distance_to_t = std::max(s.distance_to_t, linalg::spectral_norm(want - t.word(w)));
    }
    rep.samples.push_back(s);
  };

  if (check_pure(t, tol).is_pure && joint_nilpotency(t, tol.algebraic)) {
    rep.exact = true;
    sample(t, 1.0, std::nullopt);
  } else {
    for (double r : rs) {
      if (!(r > 0.0 && r < 1.0)) throw UsageError("moment_check: r must lie in (0, 1)");
      sample(t.scaled(r), r, degree_for_radius(t.lambda(), r));
    }
  }
  rep.pass = true;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    rep.pass = rep.pass && rep.samples[i].dilation_residual <= tol.eigen;
    if (i && rep.samples[i].distance_to_t > rep.samples[i - 1].distance_to_t + tol.algebraic) {
      rep.trend_decreasing = false;
    }
  }
  rep.pass = rep.pass && rep.trend_decreasing;
  return rep;
}

}  // namespace polyball
