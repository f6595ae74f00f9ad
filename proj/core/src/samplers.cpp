#include "polyball/samplers.hpp"

#include "polyball/errors.hpp"

namespace polyball {

Matrix coinvariant_closure(const TruncatedModel& model, const Matrix& seeds, std::size_t aux) {
  Matrix span = linalg::orthonormal_range(seeds);
  Matrix frontier = span;
  while (frontier.cols() > 0) {
    Matrix fresh(span.rows(), 0);
    for (int i = 1; i <= static_cast<int>(model.k()); ++i) {
      for (int s = 1; s <= model.lambda().arity(i); ++s) {
        const Matrix img = apply_tensor(model.letter_operator(Letter::adj(i, s)), frontier, aux);
        Matrix next(fresh.rows(), fresh.cols() + img.cols());
        next << fresh, img;
        fresh = std::move(next);
      }
    }
    frontier = linalg::orthonormal_range(fresh - span * (span.adjoint() * fresh));
    Matrix grown(span.rows(), span.cols() + frontier.cols());
    grown << span, frontier;
    span = linalg::orthonormal_range(grown);
  }
  return span;
}

RowTuple random_nilpotent_member(const PhaseMatrix& lambda, Rng& rng, const MemberOptions& opts) {
  if (opts.max_dim < 1 || opts.max_degree < 0 || opts.max_aux < 1) throw UsageError("random_nilpotent_member: bad options");
  for (int attempt = 0;; ++attempt) {
    // shrink the seed as attempts fail, so the loop always terminates
    const int degree = rng.integer(0, std::max(0, opts.max_degree - attempt / 8));
    const auto aux = static_cast<std::size_t>(rng.integer(1, attempt < 16 ? opts.max_aux : 1));
    const int seeds = rng.integer(1, attempt < 8 ? 2 : 1);
    const TruncatedModel model(lambda, degree);
    const auto rows = static_cast<Eigen::Index>(model.dim() * aux);
    Matrix x = rng.gaussian(rows, seeds);
    // thin the support at random so small subspaces show up too
    for (Eigen::Index row = 1; row < rows; ++row) {
      if (rng.uniform() < 0.3) x.row(row).setZero();
    }
    const Matrix q = coinvariant_closure(model, x, aux);
    if (q.cols() == 0 || q.cols() > opts.max_dim) continue;
    std::vector<std::vector<Matrix>> ops(lambda.k());
    const Matrix mix = q * rng.unitary(q.cols());
    for (int i = 1; i <= static_cast<int>(lambda.k()); ++i) {
      for (int s = 1; s <= lambda.arity(i); ++s) {
        ops[static_cast<std::size_t>(i - 1)].push_back(
            mix.adjoint() * apply_tensor(model.letter_operator(Letter::S(i, s)), mix, aux));
      }
    }
    RowTuple t(lambda, std::move(ops));
    if (opts.allow_scaling && rng.coin()) t = t.scaled(rng.uniform(0.5, 1.0));
    return t;
  }
}

LetterWord random_word(const PhaseMatrix& lambda, Rng& rng, int max_len) {
  LetterWord w;
  const int len = rng.integer(0, max_len);
  for (int q = 0; q < len; ++q) {
    const int block = rng.integer(1, static_cast<int>(lambda.k()));
    w.push_back({rng.coin(), block, rng.integer(1, lambda.arity(block))});
  }
  return w;
}

namespace {

MultiWord random_multiword(const PhaseMatrix& lambda, Rng& rng, int len) {
  auto w = MultiWord::empty(lambda.k());
  for (int q = 0; q < len; ++q) {
    const int block = rng.integer(1, static_cast<int>(lambda.k()));
    w.part(block).letters.push_back(rng.integer(1, lambda.arity(block)));
  }
  return w;
}

StarPolynomial random_terms(const PhaseMatrix& lambda, Rng& rng, int max_degree, int max_terms, bool analytic) {
  StarPolynomial p(lambda.k());
  const int terms = rng.integer(1, max_terms);
  for (int t = 0; t < terms; ++t) {
    const int total = rng.integer(0, max_degree);
    const int creators = analytic ? total : rng.integer(0, total);
    MonomialKey key{random_multiword(lambda, rng, creators), random_multiword(lambda, rng, total - creators)};
    p.add(key, {Phase{}, rng.cnormal()});
  }
  return p;
}

}  // namespace

StarPolynomial random_polynomial(const PhaseMatrix& lambda, Rng& rng, int max_degree, int max_terms) {
  return random_terms(lambda, rng, max_degree, max_terms, false);
}

StarPolynomial random_analytic_polynomial(const PhaseMatrix& lambda, Rng& rng, int max_degree, int max_terms) {
  return random_terms(lambda, rng, max_degree, max_terms, true);
}

}  // namespace polyball
