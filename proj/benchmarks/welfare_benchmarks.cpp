#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "welfare/solver.hpp"
#include "welfare/welfare_measure.hpp"
#include "welfare/wireless.hpp"

namespace {

using namespace welfare;

std::vector<double> random_utilities(std::size_t n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-10, 10);
  std::vector<double> u(n);
  for (double& x : u) x = dist(rng);
  return u;
}

void BM_EvaluateLowK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = random_utilities(n);
  const auto phi = WelfareMeasure::low_k(n / 2 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(phi, u));
}
BENCHMARK(BM_EvaluateLowK)->Arg(10)->Arg(100)->Arg(1000);

void BM_SelectWeightLowK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = random_utilities(n);
  const auto phi = WelfareMeasure::low_k(n / 2 + 1);
  for (auto _ : state) benchmark::DoNotOptimize(select_weight(phi, u));
}
BENCHMARK(BM_SelectWeightLowK)->Arg(10)->Arg(100)->Arg(1000);

void BM_SelectWeightVertexSet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<WeightVector> vs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back(WeightVector::indicator(n, i));
  const auto phi = WelfareMeasure::vertex_set(std::move(vs));
  const auto u = random_utilities(n);
  for (auto _ : state) benchmark::DoNotOptimize(select_weight(phi, u));
}
BENCHMARK(BM_SelectWeightVertexSet)->Arg(10)->Arg(50);

void BM_ProjectBox(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto set = FeasibleSet::box(std::vector<double>(n, -1.0), std::vector<double>(n, 1.0));
  const auto x = random_utilities(n);
  std::vector<double> y(n);
  for (auto _ : state) {
    y = x;
    project_in_place(set, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ProjectBox)->Arg(10)->Arg(1000);

void BM_ProjectSingleRowLogPolytope(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto set = FeasibleSet::log_polytope(1, n, std::vector<double>(n, 1.0), {1.0});
  const auto x = random_utilities(n);
  std::vector<double> y(n);
  for (auto _ : state) {
    y = x;
    project_in_place(set, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ProjectSingleRowLogPolytope)->Arg(10)->Arg(100);

// One full solver run per benchmark iteration; items are solver iterations.
void BM_SmwmKLowWireless(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const wireless::UtilityModel oracle(wireless::generate_scenario(n, 1));
  const auto set = FeasibleSet::box(std::vector<double>(n, std::log(0.05)),
                                    std::vector<double>(n, 0.0));
  const Allocation start(std::vector<double>(n, 0.0));
  constexpr std::size_t kHorizon = 500;
  const auto schedule = StepSchedule::fixed_for_horizon(5.0, kHorizon);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smwm_klow(n / 2, oracle, set, start, kHorizon, schedule));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kHorizon));
}
BENCHMARK(BM_SmwmKLowWireless)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SmwmGenericLowKWireless(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const wireless::UtilityModel oracle(wireless::generate_scenario(n, 1));
  const auto set = FeasibleSet::box(std::vector<double>(n, std::log(0.05)),
                                    std::vector<double>(n, 0.0));
  const Allocation start(std::vector<double>(n, 0.0));
  constexpr std::size_t kHorizon = 500;
  const auto schedule = StepSchedule::fixed_for_horizon(5.0, kHorizon);
  const auto phi = WelfareMeasure::low_k(n / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smwm(phi, oracle, set, start, kHorizon, schedule));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kHorizon));
}
BENCHMARK(BM_SmwmGenericLowKWireless)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
