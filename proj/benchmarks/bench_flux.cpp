#include <benchmark/benchmark.h>

#include "flux/dp_oracle.hpp"
#include "flux/multi_player.hpp"
#include "flux/simulator.hpp"

namespace {

void BM_SolveSingleBinary(benchmark::State& state) {
  const flux::SinglePlayerGame game(static_cast<int>(state.range(0)), 1.3,
                                    flux::SignalModel::bernoulli(0.3, 1.0));
  const auto grid = flux::ReportGrid::binary(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(flux::solve_single(game, grid));
}
BENCHMARK(BM_SolveSingleBinary)->Arg(10)->Arg(100)->Arg(1000);

void BM_SolveSingleUniform(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const auto model = flux::discretize_uniform(1.0, levels);
  const flux::SinglePlayerGame game(20, 1.3, model);
  const auto grid = flux::ReportGrid::evenly_spaced(1.0, levels);
  for (auto _ : state) benchmark::DoNotOptimize(flux::solve_single(game, grid));
}
BENCHMARK(BM_SolveSingleUniform)->Arg(11)->Arg(41);

void BM_BestResponse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const flux::MultiPlayerGame game(n, n, 10, 2.0, flux::SignalModel::bernoulli(0.5, 1.0));
  const std::vector<flux::StationaryPolicy> opponents(
      static_cast<std::size_t>(n - 1), flux::StationaryPolicy::lying_till_busted(10, n));
  for (auto _ : state) benchmark::DoNotOptimize(flux::best_response(game, 0, opponents));
}
BENCHMARK(BM_BestResponse)->Arg(2)->Arg(4)->Arg(8);

void BM_MonteCarloSingle(benchmark::State& state) {
  const flux::SinglePlayerGame game(20, 1.3, flux::SignalModel::bernoulli(0.3, 1.0));
  const auto pol = flux::basic_policy(flux::BasicStrategy::LyingTillBusted,
                                      flux::ReportGrid::binary(1.0), 20);
  flux::MonteCarloOptions opts;
  opts.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(flux::monte_carlo(game, pol, 10000, 1, opts));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_MonteCarloSingle);

}  // namespace

BENCHMARK_MAIN();
