#include <cmath>

#include <gtest/gtest.h>

#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/simulate.hpp"

using namespace hawkes;

namespace {

HawkesModel marked_model() {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.2);
  s.kernels = {Kernel::exponential(0.5, 1.0)};
  s.marks = {ExponentialMarks{1.0}};
  s.mark_functions = {MarkFunction::identity()};
  return HawkesModel(std::move(s));
}

EventSeries simulated(const HawkesModel& m, double T, std::uint64_t seed) {
  SimConfig c;
  c.horizon = T;
  c.seed = seed;
  return simulate(m, c).events;
}

}  // namespace

TEST(Estimate, OneDimensionalExponential) {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.5);
  s.kernels = {Kernel::exponential(0.5, 1.0)};
  const EventSeries ev = simulated(HawkesModel(std::move(s)), 2e5, 31);
  EstimationConfig c;
  c.t_max = 10.0;
  c.h = 0.1;
  c.Q = 30;
  const EstimationResult r = estimate(ev, c);
  EXPECT_NEAR(r.solution.norms(0, 0), 0.5, 0.05);
  EXPECT_NEAR(r.baseline(0), 0.5, 0.08);
  const auto& k = r.kernels.kernel(0, 0);
  for (std::size_t n = 0; n < r.kernels.grid.size(); n += 20) {
    const double t = r.kernels.grid[n];
    if (t < 0.5) continue;
    EXPECT_NEAR(k[n], 0.5 * std::exp(-t), 0.05) << t;
  }
  EXPECT_EQ(r.kernels.grid.size(), 241u);
}

TEST(Estimate, LevelsAreNormalized) {
  const EventSeries ev = simulated(marked_model(), 5e4, 32);
  EstimationConfig c;
  c.t_max = 8.0;
  c.h = 0.25;
  c.Q = 16;
  c.bin_edges = {uniform_edges(0.0, 3.0, 0.5)};
  const EstimationResult r = estimate(ev, c);
  const auto& lv = r.solution.levels[0];
  const auto& p = r.bins[0].probabilities;
  double s = 0.0;
  for (std::size_t l = 0; l < lv.size(); ++l) s += p[l] * lv[l];
  EXPECT_NEAR(s, 1.0, 1e-10);
  // f(xi) = xi: levels increase with the mark.
  EXPECT_LT(lv.front(), lv.back());
}

TEST(Estimate, SingleBinEqualsUnmarked) {
  const EventSeries ev = simulated(marked_model(), 2e4, 33);
  EstimationConfig c;
  c.t_max = 8.0;
  c.h = 0.25;
  c.Q = 16;
  c.bin_edges = {{0.0, 1e9}};
  const EstimationResult a = estimate(ev, c);
  c.bin_edges.clear();
  const EstimationResult b = estimate(ev.without_marks(), c);
  EXPECT_EQ(a.kernels.combined, b.kernels.combined);
  EXPECT_EQ(a.solution.norms, b.solution.norms);
}

TEST(Estimate, AutomaticSelections) {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.5);
  s.kernels = {Kernel::exponential(0.5, 1.0)};
  const EventSeries ev = simulated(HawkesModel(std::move(s)), 5e4, 34);
  EstimationConfig c;
  c.t_max = 10.0;
  c.threads = 1;
  const EstimationResult r = estimate(ev, c);
  ASSERT_TRUE(r.q_selection.has_value());
  EXPECT_GE(r.config.Q, c.Q0);
  ASSERT_EQ(r.scans.size(), 1u);
  EXPECT_EQ(r.h(0, 0), r.scans[0].h_star);
  EXPECT_EQ(r.config.h_grid.size(), 16u);
}

TEST(Estimate, BinsOnUnmarkedComponentRejected) {
  ComponentEvents a{{1.0, 2.0}, {}, false};
  const EventSeries ev(100.0, {a});
  EstimationConfig c;
  c.t_max = 5.0;
  c.h = 1.0;
  c.Q = 8;
  c.bin_edges = {{0.0, 1.0, 2.0}};
  EXPECT_THROW(estimate(ev, c), ConfigError);
}

TEST(Estimate, EmptyBinsMergedWithWarning) {
  const EventSeries ev = simulated(marked_model(), 2e4, 35);
  EstimationConfig c;
  c.bin_edges = {{0.0, 1.0, 50.0, 60.0, 70.0}};
  std::vector<std::string> w;
  ScopedWarningCapture capture([&](std::string_view m) { w.emplace_back(m); });
  const auto bins = resolve_bins(ev, c);
  EXPECT_LT(bins[0].size(), 4u);
  EXPECT_FALSE(w.empty());
}

TEST(Estimate, EstimatedModelRoundTrip) {
  const EventSeries ev = simulated(marked_model(), 3e4, 36);
  EstimationConfig c;
  c.t_max = 8.0;
  c.h = 0.25;
  c.Q = 16;
  c.bin_edges = {uniform_edges(0.0, 3.0, 1.0)};
  const EstimationResult r = estimate(ev, c);
  const HawkesModel m = estimated_model(r, ev);
  EXPECT_EQ(m.dim(), 1);
  EXPECT_TRUE(m.marked(0));
  EXPECT_NEAR(m.baseline()(0), r.baseline(0), 1e-15);
  EXPECT_EQ(m.mark_function(0, 0).kind(), MarkFunction::Kind::PiecewiseConstant);
}
