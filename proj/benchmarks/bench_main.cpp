#include <benchmark/benchmark.h>

#include "hawkes/bandwidth.hpp"
#include "hawkes/condlaw.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/gof.hpp"
#include "hawkes/oracle.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/whsolver.hpp"

using namespace hawkes;

namespace {

HawkesModel exp_1d() {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.05);
  s.kernels = {Kernel::exponential(0.1, 0.2)};
  return HawkesModel(std::move(s));
}

const EventSeries& events_1e5() {
  static const EventSeries ev = [] {
    SimConfig c;
    c.horizon = 1e6;
    c.seed = 1;
    return simulate(exp_1d(), c).events;
  }();
  return ev;
}

}  // namespace

static void BM_Simulate(benchmark::State& state) {
  const HawkesModel m = exp_1d();
  SimConfig c;
  c.horizon = static_cast<double>(state.range(0)) / 0.1;
  for (auto _ : state) {
    c.seed++;
    benchmark::DoNotOptimize(simulate(m, c).events.size(0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_ConditionalLaw(benchmark::State& state) {
  CondLawConfig c;
  c.h = 0.5;
  c.t_max = 40.0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_g(events_1e5(), 0, 0, c).values.data());
}
BENCHMARK(BM_ConditionalLaw)->Unit(benchmark::kMillisecond);

static void BM_Contrast(benchmark::State& state) {
  BandwidthConfig c;
  c.t_max = 40.0;
  c.threads = 1;
  const auto grid = geometric_grid(0.05, 10.0, 16);
  for (auto _ : state) benchmark::DoNotOptimize(select_bandwidth(events_1e5(), 0, 0, grid, c).h_star);
}
BENCHMARK(BM_Contrast)->Unit(benchmark::kMillisecond);

static void BM_Oracle(benchmark::State& state) {
  OracleConfig c;
  c.horizon = 400.0;
  c.step = 0.01;
  c.output_horizon = 40.0;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_g(exp_1d(), c).points());
}
BENCHMARK(BM_Oracle)->Unit(benchmark::kMillisecond);

static void BM_NystromSolve(benchmark::State& state) {
  OracleConfig c;
  c.horizon = 400.0;
  c.step = 0.01;
  c.output_horizon = 41.0;
  const auto input = oracle_input(oracle_g(exp_1d(), c), 40.0);
  const int Q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_wiener_hopf(input, Q).norms(0, 0));
}
BENCHMARK(BM_NystromSolve)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Rescale(benchmark::State& state) {
  const HawkesModel m = exp_1d();
  for (auto _ : state) benchmark::DoNotOptimize(rescale(m, events_1e5()).components[0].p_value);
}
BENCHMARK(BM_Rescale)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
