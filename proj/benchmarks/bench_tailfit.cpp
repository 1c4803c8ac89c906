#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "tailfit/empirical.hpp"
#include "tailfit/fit.hpp"
#include "tailfit/pled.hpp"
#include "tailfit/sampler.hpp"
#include "tailfit/tpa.hpp"

namespace {

void BM_TpaConstruct(benchmark::State& state) {
  const std::int64_t a2 = state.range(0);
  for (auto _ : state) {
    tailfit::TpaDistribution dist({a2, 0.83, 2});
    benchmark::DoNotOptimize(dist.p_a2());
  }
}
BENCHMARK(BM_TpaConstruct)->Arg(90)->Arg(2000)->Arg(100000);

void BM_TpaCcdf(benchmark::State& state) {
  const tailfit::TpaDistribution dist({90, 0.83, 2});
  std::int64_t x = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dist.ccdf(x));
    x = (x < 5000) ? x + 1 : 2;
  }
}
BENCHMARK(BM_TpaCcdf);

void BM_PledNormalizer(benchmark::State& state) {
  const double c = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(tailfit::pled_normalizer({1.63, c, 2}, tailfit::kPledDefaultTol));
}
BENCHMARK(BM_PledNormalizer)->Arg(350)->Arg(50000);

void BM_PledFitTable(benchmark::State& state) {
  std::vector<std::int64_t> degrees;
  for (std::int64_t x = 2; x <= 4000; x += 3) degrees.push_back(x);
  const tailfit::PledParams params{1.63, static_cast<double>(state.range(0)), 2};
  for (auto _ : state)
    benchmark::DoNotOptimize(tailfit::detail::pled_fit_log_ccdf_table(params, degrees, 1e-9));
}
BENCHMARK(BM_PledFitTable)->Arg(350)->Arg(100000);

void BM_SampleTpa(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(tailfit::sample({tailfit::TpaParams{90, 0.83, 2}, n, 1}));
}
BENCHMARK(BM_SampleTpa)->Arg(10000)->Arg(100000);

void BM_FitTpa(benchmark::State& state) {
  const tailfit::DegreeHistogram hist =
      tailfit::sample({tailfit::TpaParams{90, 0.83, 2}, 100000, 7});
  const tailfit::EmpiricalDistribution emp = tailfit::truncate_renormalize(hist, 2);
  tailfit::FitConfig config;
  config.grid_density = 16;
  config.refine_iterations = 20;
  for (auto _ : state) benchmark::DoNotOptimize(tailfit::fit_tpa(emp, config));
}
BENCHMARK(BM_FitTpa);

}  // namespace

BENCHMARK_MAIN();
