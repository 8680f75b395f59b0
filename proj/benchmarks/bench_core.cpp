#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nilprob/bias.hpp"
#include "nilprob/stats.hpp"

using namespace nilprob;

namespace {

algebra::ParamsPtr hyperbolic(unsigned p, std::size_t n) { return algebra::make_params(fieldlin::hyperbolic_form(p, n)); }

algebra::AlgebraElement random_element(const algebra::ParamsPtr& P, std::mt19937_64& rng) {
  algebra::AlgebraElement a(P);
  for (std::size_t i = 0; i < P->element_size(); ++i) a.set_digit(i, static_cast<long long>(rng() % P->p()));
  return a;
}

void BM_AlgebraMultiply(benchmark::State& state) {
  const auto P = hyperbolic(2, static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(1);
  const auto a = random_element(P, rng), b = random_element(P, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_AlgebraMultiply)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_GroupCommutator(benchmark::State& state) {
  const groups::AlgebraGroup G(hyperbolic(2, static_cast<std::size_t>(state.range(0))));
  std::mt19937_64 rng(2);
  const auto x = G.sample(rng), y = G.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(G.commutator(x, y));
}
BENCHMARK(BM_GroupCommutator)->Arg(1)->Arg(2)->Arg(4);

void BM_ClassSize(benchmark::State& state) {
  const groups::AlgebraGroup G(hyperbolic(2, static_cast<std::size_t>(state.range(0))));
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    const auto c = G.commutator(G.sample(rng), G.sample(rng));
    benchmark::DoNotOptimize(G.class_size(c));
  }
}
BENCHMARK(BM_ClassSize)->Arg(1)->Arg(2)->Arg(3);

void BM_D2Exact(benchmark::State& state) {
  const groups::AlgebraGroup G(hyperbolic(2, 1));
  for (auto _ : state) benchmark::DoNotOptimize(stats::d2_exact(G));
}
BENCHMARK(BM_D2Exact)->Unit(benchmark::kMillisecond);

void BM_D2MonteCarlo(benchmark::State& state) {
  const groups::AlgebraGroup G(hyperbolic(2, 2));
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stats::dk_monte_carlo(G, 2, 100000, 7, threads));
}
BENCHMARK(BM_D2MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_QuadVerifyExhaustive(benchmark::State& state) {
  const auto P = hyperbolic(2, 2);
  const auto e = bias::family_quad_expression(P);
  const auto F = bias::lie4_map(P);
  for (auto _ : state) benchmark::DoNotOptimize(bias::verify_expression(e, F));
}
BENCHMARK(BM_QuadVerifyExhaustive)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
