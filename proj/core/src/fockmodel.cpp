#include "polyball/fockmodel.hpp"

#include <algorithm>
#include <numeric>

#include "polyball/errors.hpp"

namespace polyball {

std::optional<SymbolicImage> symbolic_apply(const PhaseMatrix& lambda, const Letter& letter,
                                            const MultiWord& chi) {
  const int i = letter.block;
  Phase phase;
  for (int j = 1; j < i; ++j) phase *= aggregate_phase(lambda, i, letter.index, chi.part(j));
  if (!letter.starred) {
    return SymbolicImage{phase, prepend_letter(chi, i, letter.index, lambda.n())};
  }
  const auto& part = chi.part(i);
  if (part.empty() || part.letters.front() != letter.index) return std::nullopt;
  return SymbolicImage{phase.conj(), strip_leftmost(chi, i)};
}

std::optional<SymbolicImage> symbolic_apply(const PhaseMatrix& lambda, const LetterWord& word,
                                            const MultiWord& chi) {
  SymbolicImage cur{Phase{}, chi};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    auto next = symbolic_apply(lambda, *it, cur.word);
    if (!next) return std::nullopt;
    cur.phase *= next->phase;
    cur.word = std::move(next->word);
  }
  return cur;
}

SymbolicVector symbolic_evaluate(const PhaseMatrix& lambda, const StarPolynomial& p, const MultiWord& chi) {
  SymbolicVector out;
  for (const auto& [key, c] : p.terms()) {
    auto img = symbolic_apply(lambda, monomial_letters(key), chi);
    if (!img) continue;
    out[img->word] += (c.phase * img->phase).value() * c.scale;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == cplx{}; });
  return out;
}

MonomialOperator MonomialOperator::identity(std::size_t dim) {
  std::vector<Entry> cols(dim);
  for (std::size_t j = 0; j < dim; ++j) cols[j] = std::pair{j, Phase{}};
  return MonomialOperator(std::move(cols));
}

MonomialOperator MonomialOperator::compose(const MonomialOperator& other) const {
  if (other.dim() != dim()) throw UsageError("MonomialOperator::compose: dimension mismatch");
  std::vector<Entry> cols(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const auto& first = other.cols_[j];
    if (!first) continue;
    const auto& second = cols_[first->first];
    if (!second) continue;
    cols[j] = std::pair{second->first, second->second * first->second};
  }
  return MonomialOperator(std::move(cols));
}

MonomialOperator MonomialOperator::adjoint() const {
  std::vector<Entry> cols(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    if (const auto& e = cols_[j]) {
      if (cols[e->first]) throw UsageError("MonomialOperator::adjoint: operator is not a partial isometry");
      cols[e->first] = std::pair{j, e->second.conj()};
    }
  }
  return MonomialOperator(std::move(cols));
}

MonomialOperator MonomialOperator::times(const Phase& p) const {
  auto cols = cols_;
  for (auto& e : cols) {
    if (e) e->second *= p;
  }
  return MonomialOperator(std::move(cols));
}

Matrix MonomialOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < dim(); ++j) {
    if (const auto& e = cols_[j]) m(static_cast<Eigen::Index>(e->first), static_cast<Eigen::Index>(j)) = e->second.value();
  }
  return m;
}

TruncatedModel::TruncatedModel(PhaseMatrix lambda, int max_degree)
    : lambda_(std::move(lambda)), degree_(max_degree), basis_(enumerate_basis(lambda_.n(), max_degree)) {
  for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
  mats_.resize(2 * static_cast<std::size_t>(std::accumulate(lambda_.n().begin(), lambda_.n().end(), 0)));
  for (bool starred : {false, true}) {
    for (int i = 1; i <= static_cast<int>(k()); ++i) {
      for (int s = 1; s <= lambda_.arity(i); ++s) {
        std::vector<MonomialOperator::Entry> cols(basis_.size());
        for (std::size_t j = 0; j < basis_.size(); ++j) {
          auto img = symbolic_apply(lambda_, Letter{starred, i, s}, basis_[j]);
          if (!img) continue;
          if (auto row = index_of(img->word)) cols[j] = std::pair{*row, img->phase};
        }
        ops_.emplace_back(std::move(cols));
      }
    }
  }
}

std::optional<std::size_t> TruncatedModel::index_of(const MultiWord& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> TruncatedModel::interior(int creator_degree) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    if (basis_[j].total_degree() <= degree_ - creator_degree) out.push_back(j);
  }
  return out;
}

std::size_t TruncatedModel::slot(const Letter& l) const {
  if (l.block < 1 || static_cast<std::size_t>(l.block) > k() || l.index < 1 || l.index > lambda_.arity(l.block)) {
    throw UsageError("letter out of range for the model");
  }
  std::size_t g = 0;
  for (int i = 1; i < l.block; ++i) g += static_cast<std::size_t>(lambda_.arity(i));
  g += static_cast<std::size_t>(l.index - 1);
  std::size_t total = 0;
  for (int a : n()) total += static_cast<std::size_t>(a);
  return l.starred ? total + g : g;
}

const MonomialOperator& TruncatedModel::letter_operator(const Letter& l) const { return ops_[slot(l)]; }
const Matrix& TruncatedModel::letter_matrix(const Letter& l) const {
  auto& m = mats_[slot(l)];
  if (!m) m = ops_[slot(l)].dense();
  return *m;
}

OperatorMatrix build_matrix(const TruncatedModel& model, const StarPolynomial& p) {
  if (p.blocks() && p.blocks() != model.k()) throw UsageError("build_matrix: polynomial does not match the model");
  const auto n = static_cast<Eigen::Index>(model.dim());
  OperatorMatrix out{Matrix::Zero(n, n), to_string(p), p.creator_degree()};
  for (const auto& [key, c] : p.terms()) {
    const auto word = monomial_letters(key);
    for (std::size_t j = 0; j < model.dim(); ++j) {
      auto img = symbolic_apply(model.lambda(), word, model.basis()[j]);
      if (!img) continue;
      auto row = model.index_of(img->word);
      if (!row) continue;
      out.matrix(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(j)) +=
          (c.phase * img->phase).value() * c.scale;
    }
  }
  return out;
}

OperatorMatrix word_matrix(const TruncatedModel& model, const LetterWord& word) {
  auto op = MonomialOperator::identity(model.dim());
  for (const auto& l : word) op = op.compose(model.letter_operator(l));
  return {op.dense(), "word " + to_string(word), static_cast<int>(word.size())};
}

OperatorMatrix defect_operator(const TruncatedModel& model, double r, std::span<const int> subset) {
  if (subset.empty()) throw UsageError("defect_operator: subset must be nonempty");
  const auto n = static_cast<Eigen::Index>(model.dim());
  Matrix out = Matrix::Identity(n, n);
  std::string tag = "defect r=" + std::to_string(r) + " C={";
  for (int i : subset) {
    if (i < 1 || static_cast<std::size_t>(i) > model.k()) throw UsageError("defect_operator: block out of range");
    Matrix factor = Matrix::Identity(n, n);
    for (int s = 1; s <= model.lambda().arity(i); ++s) {
      const auto& sh = model.shift(i, s);
      factor -= r * r * sh * sh.adjoint();
    }
    out = out * factor;
    tag += std::to_string(i) + ",";
  }
  tag.back() = '}';
  return {std::move(out), tag, 2 * static_cast<int>(subset.size())};
}

OperatorMatrix rank_one_approx(const TruncatedModel& model, const CoefficientMap& p, const CoefficientMap& q,
                               int m) {
  if (m > model.degree()) throw UsageError("rank_one_approx: degree cap m exceeds the truncation degree");
  if (m < 0) throw UsageError("rank_one_approx: degree cap m must be >= 0");
  auto poly = [&](const CoefficientMap& coeffs) {
    StarPolynomial out(model.k());
    for (const auto& [w, c] : coeffs) {
      if (w.blocks() != model.k()) throw UsageError("rank_one_approx: coefficient word does not match the model");
      if (w.total_degree() <= m) out.add({w, MultiWord::empty(model.k())}, {Phase{}, c});
    }
    return out;
  };
  std::vector<int> all(model.k());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i + 1);
  const auto qm = build_matrix(model, poly(q)).matrix;
  const auto pm = build_matrix(model, poly(p)).matrix;
  const auto vacuum = defect_operator(model, 1.0, all).matrix;
  return {qm * vacuum * pm.adjoint(), "rank-one m=" + std::to_string(m), 2 * m};
}

double interior_residual(const Matrix& a, const Matrix& b, const TruncatedModel& model, int m) {
  const auto cols = model.interior(m);
  if (cols.empty()) return 0.0;
  return linalg::spectral_norm(linalg::columns(a - b, cols));
}

Matrix apply_tensor(const MonomialOperator& op, const Matrix& x, std::size_t aux) {
  if (static_cast<std::size_t>(x.rows()) != op.dim() * aux) throw UsageError("apply_tensor: dimension mismatch");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  const auto a = static_cast<Eigen::Index>(aux);
  for (std::size_t j = 0; j < op.dim(); ++j) {
    const auto& e = op.column(j);
    if (!e) continue;
    out.middleRows(static_cast<Eigen::Index>(e->first) * a, a) +=
        e->second.value() * x.middleRows(static_cast<Eigen::Index>(j) * a, a);
  }
  return out;
}

Matrix apply_kron(const Matrix& a, const Matrix& x, std::size_t aux) {
  const auto n = a.rows();
  const auto r = static_cast<Eigen::Index>(aux);
  if (a.cols() != n || x.rows() != n * r) throw UsageError("apply_kron: dimension mismatch");
  Matrix out(x.rows(), x.cols());
  Matrix slice(n, x.cols());
  for (Eigen::Index c = 0; c < r; ++c) {
    for (Eigen::Index b = 0; b < n; ++b) slice.row(b) = x.row(b * r + c);
    const Matrix img = a * slice;
    for (Eigen::Index b = 0; b < n; ++b) out.row(b * r + c) = img.row(b);
  }
  return out;
}

std::vector<std::size_t> tensor_interior(const TruncatedModel& model, std::size_t aux, int max_degree) {
  std::vector<std::size_t> out;
  for (auto b : model.interior(model.degree() - max_degree)) {
    for (std::size_t c = 0; c < aux; ++c) out.push_back(b * aux + c);
  }
  return out;
}

int support_degree(const TruncatedModel& model, const Matrix& x, std::size_t aux, double tol) {
  int deg = -1;
  for (Eigen::Index row = 0; row < x.rows(); ++row) {
    if (x.row(row).cwiseAbs().maxCoeff() > tol) {
      deg = std::max(deg, model.basis()[static_cast<std::size_t>(row) / aux].total_degree());
    }
  }
  return deg;
}

Matrix generated_span(const TruncatedModel& model, const Matrix& q, std::size_t aux, int steps) {
  Matrix span = linalg::orthonormal_range(q);
  Matrix frontier = span;
  for (int step = 0; step < steps && frontier.cols() > 0; ++step) {
    Matrix images(span.rows(), 0);
    for (int i = 1; i <= static_cast<int>(model.k()); ++i) {
      for (int s = 1; s <= model.lambda().arity(i); ++s) {
        const Matrix img = apply_tensor(model.letter_operator(Letter::S(i, s)), frontier, aux);
        Matrix next(images.rows(), images.cols() + img.cols());
        next << images, img;
        images = std::move(next);
      }
    }
    // keep only the directions that are new
    const Matrix fresh = images - span * (span.adjoint() * images);
    frontier = linalg::orthonormal_range(fresh);
    Matrix grown(span.rows(), span.cols() + frontier.cols());
    grown << span, frontier;
    span = linalg::orthonormal_range(grown);
  }
  return span;
}

int contained_degree(const TruncatedModel& model, const Matrix& span, const Matrix& l, std::size_t aux,
                     double tol) {
  const auto r = static_cast<Eigen::Index>(aux);
  for (int m = 0; m <= model.degree(); ++m) {
    for (std::size_t b = 0; b < model.dim(); ++b) {
      if (model.basis()[b].total_degree() != m) continue;
      Matrix v = Matrix::Zero(span.rows(), l.cols());
      v.middleRows(static_cast<Eigen::Index>(b) * r, r) = l;
      const Matrix miss = v - span * (span.adjoint() * v);
      if (miss.size() && miss.cwiseAbs().maxCoeff() > tol) return m - 1;
    }
  }
  return model.degree();
}

}  // namespace polyball
