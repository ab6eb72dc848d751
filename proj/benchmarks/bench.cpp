// Microbenchmarks for the solver hot paths.

#include <benchmark/benchmark.h>

#include "nostcap/channel.hpp"
#include "nostcap/markov.hpp"
#include "nostcap/simulate.hpp"
#include "nostcap/solver.hpp"

namespace {

nostcap::AveragedChannel noisy_post_av() {
  return nostcap::average_channel(nostcap::make_noisy_post(0.5, 0.5));
}

void BM_StationaryDistribution(benchmark::State& state) {
  const auto av = noisy_post_av();
  nostcap::Policy pol;
  pol.p = nostcap::Table2<double>(2, 2, 0.5);
  const auto kernel = nostcap::induced_output_kernel(pol, av);
  for (auto _ : state) {
    auto pi = nostcap::stationary_distribution(kernel);
    benchmark::DoNotOptimize(pi);
  }
}
BENCHMARK(BM_StationaryDistribution);

void BM_ConditionalMutualInformation(benchmark::State& state) {
  const auto av = noisy_post_av();
  nostcap::Policy pol;
  pol.p = nostcap::Table2<double>(2, 2, 0.5);
  const auto joint = nostcap::joint_from_policy(pol, av);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nostcap::conditional_mutual_information(joint, av));
  }
}
BENCHMARK(BM_ConditionalMutualInformation);

void BM_SolveCfbNoisyPost(benchmark::State& state) {
  const auto c = nostcap::make_noisy_post(0.5, 0.5);
  nostcap::SolverConfig cfg;
  cfg.tolerance = 1e-9;
  for (auto _ : state) {
    auto res = nostcap::solve_cfb(c, cfg);
    benchmark::DoNotOptimize(res.value_bits);
  }
}
BENCHMARK(BM_SolveCfbNoisyPost);

void BM_SolveCfbCsiNoisyPost(benchmark::State& state) {
  const auto c = nostcap::make_noisy_post(0.5, 0.5);
  nostcap::SolverConfig cfg;
  cfg.tolerance = 1e-9;
  for (auto _ : state) {
    auto res = nostcap::solve_cfb_csi(c, cfg);
    benchmark::DoNotOptimize(res.value_bits);
  }
}
BENCHMARK(BM_SolveCfbCsiNoisyPost);

void BM_GridOracle(benchmark::State& state) {
  const auto av = noisy_post_av();
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(nostcap::grid_oracle(av, step));
  }
}
BENCHMARK(BM_GridOracle)->Arg(20)->Arg(100);

void BM_SimulatePolicy(benchmark::State& state) {
  const auto c = nostcap::make_noisy_post(0.5, 0.0);
  nostcap::Policy pol;
  pol.p = nostcap::Table2<double>(2, 2, 0.0);
  pol.p(0, 0) = 0.6;
  pol.p(0, 1) = 0.4;
  pol.p(1, 0) = 0.4;
  pol.p(1, 1) = 0.6;
  nostcap::SimConfig cfg;
  cfg.steps = state.range(0);
  cfg.seed = 1;
  for (auto _ : state) {
    auto rep = nostcap::simulate_policy(c, pol, cfg);
    benchmark::DoNotOptimize(rep.empirical_rate_bits);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePolicy)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
