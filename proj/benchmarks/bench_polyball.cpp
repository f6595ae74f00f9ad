#include <benchmark/benchmark.h>

#include <vector>

#include "polyball/berezin.hpp"
#include "polyball/fockmodel.hpp"
#include "polyball/random.hpp"
#include "polyball/samplers.hpp"
#include "polyball/wold.hpp"

using namespace polyball;

namespace {

PhaseMatrix cfg_b() {
  const std::vector<LambdaEntry> raw{{1, 2, 1, 1, {1, 4}}, {1, 2, 2, 1, {1, 2}}};
  return validate_lambda({2, 1}, raw);
}

void BM_ReduceWord(benchmark::State& state) {
  const auto lambda = cfg_b();
  Rng rng(1);
  std::vector<LetterWord> words;
  for (int q = 0; q < 64; ++q) words.push_back(random_word(lambda, rng, static_cast<int>(state.range(0))));
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce_word(lambda, words[q++ % words.size()]));
  }
}
BENCHMARK(BM_ReduceWord)->Arg(8)->Arg(16)->Arg(32);

void BM_BuildMatrix(benchmark::State& state) {
  const auto lambda = cfg_b();
  const TruncatedModel model(lambda, static_cast<int>(state.range(0)));
  Rng rng(2);
  const auto p = random_polynomial(lambda, rng, 4, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_matrix(model, p));
  }
  state.counters["dim"] = static_cast<double>(model.dim());
}
BENCHMARK(BM_BuildMatrix)->Arg(3)->Arg(4)->Arg(5);

void BM_BerezinKernel(benchmark::State& state) {
  const auto lambda = cfg_b();
  Rng rng(3);
  MemberOptions opts;
  opts.max_dim = static_cast<int>(state.range(0));
  auto t = random_nilpotent_member(lambda, rng, opts);
  while (2 * static_cast<int>(t.dim()) < opts.max_dim) t = random_nilpotent_member(lambda, rng, opts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(berezin_kernel(t));
  }
  state.counters["dim"] = static_cast<double>(t.dim());
}
BENCHMARK(BM_BerezinKernel)->Arg(4)->Arg(8);

void BM_WoldAssembly(benchmark::State& state) {
  Rng rng(4);
  const auto rs = random_spec(rng);
  for (auto _ : state) {
    const auto a = assemble(rs.lambda, rs.spec, rs.degree);
    benchmark::DoNotOptimize(wandering_data(a));
  }
}
BENCHMARK(BM_WoldAssembly);

}  // namespace

BENCHMARK_MAIN();
