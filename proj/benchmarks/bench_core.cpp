#include <benchmark/benchmark.h>

#include <vector>

#include "flmc/diagnostics.hpp"
#include "flmc/dynamics.hpp"
#include "flmc/objectives.hpp"
#include "flmc/rng.hpp"
#include "flmc/special.hpp"
#include "flmc/stable.hpp"

namespace {

void BM_LogGamma(benchmark::State& state) {
  double x = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flmc::special::log_gamma(x));
    x += 1e-6;
    if (x > 49.0) x = 0.37;
  }
}
BENCHMARK(BM_LogGamma);

void BM_SampleStable(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0)) / 10.0;
  flmc::Rng rng(1);
  const flmc::StableParams params{alpha, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(flmc::sample_sas(params, rng));
  }
}
BENCHMARK(BM_SampleStable)->Arg(12)->Arg(15)->Arg(18)->Arg(20);

void BM_LevyIncrement(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  flmc::Rng rng(2);
  std::vector<double> out(static_cast<std::size_t>(dim));
  for (auto _ : state) {
    flmc::sample_levy_increment(1.7, 1e-3, 10.0, out, rng);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * dim);
}
BENCHMARK(BM_LevyIncrement)->Arg(1)->Arg(8)->Arg(64);

void BM_FlaStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto obj = flmc::make_benchmark("fractional_power_well", dim);
  flmc::RunConfig cfg;
  cfg.algorithm = flmc::Algorithm::fla;
  cfg.alpha = 1.7;
  cfg.beta = 10.0;
  cfg.eta = 1e-3;
  cfg.steps = 1;
  flmc::Rng rng(3);
  std::vector<double> w(static_cast<std::size_t>(dim), 0.3);
  for (auto _ : state) {
    w = flmc::fla_step(w, obj, cfg, rng);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_FlaStep)->Arg(1)->Arg(8)->Arg(64);

void BM_Wasserstein1d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  flmc::Rng rng(4);
  std::vector<double> a(n), b(n);
  for (auto& x : a) x = rng.gaussian();
  for (auto& x : b) x = rng.gaussian();
  const auto da = flmc::EmpiricalDistribution::scalar(a);
  const auto db = flmc::EmpiricalDistribution::scalar(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flmc::wasserstein_q_1d(da, db, 1.4));
  }
  state.SetComplexityN(static_cast<long>(n));
}
BENCHMARK(BM_Wasserstein1d)->Range(1 << 8, 1 << 16)->Complexity();

}  // namespace

BENCHMARK_MAIN();
