#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "hawkes/bandwidth.hpp"
#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/simulate.hpp"

using namespace hawkes;

namespace {

EventSeries exp_events(double horizon, std::uint64_t seed) {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.05);
  s.kernels = {Kernel::exponential(0.1, 0.2)};
  SimConfig c;
  c.horizon = horizon;
  c.seed = seed;
  return simulate(HawkesModel(std::move(s)), c).events;
}

}  // namespace

TEST(Bandwidth, GeometricGrid) {
  const auto g = geometric_grid(0.01, 10.0, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_NEAR(g[1], 0.1, 1e-15);
  EXPECT_NEAR(g.back(), 10.0, 1e-13);
}

TEST(Bandwidth, DefaultGridBounds) {
  const EventSeries s = exp_events(2e4, 1);
  const auto g = default_h_grid(s, 40.0);
  ASSERT_EQ(g.size(), 16u);
  EXPECT_NEAR(g.front(), std::min(median_inter_event_time(s) / 4.0, 0.1), 1e-15);
  EXPECT_NEAR(g.back(), 10.0, 1e-12);
}

TEST(Bandwidth, IseMatchesBruteForce) {
  HawkesModel::Spec sp;
  sp.baseline = Eigen::VectorXd::Constant(1, 1.0);
  sp.kernels = {Kernel()};
  SimConfig c;
  c.horizon = 2e3;
  c.seed = 8;
  const EventSeries s = simulate(HawkesModel(std::move(sp)), c).events;
  const double h = 0.5, tmax = 5.0;
  const auto truth = [](double t) { return 0.2 * std::exp(-t); };
  // g-hat(t) = #{lags in [t, t + h)} / (J h) - Lambda, integrated by the midpoint rule.
  const PairLags p = collect_lags(s, 0, 0, tmax + h, s.horizon() - (tmax + h));
  std::vector<double> lags = p.lags;
  std::sort(lags.begin(), lags.end());
  const double rate = static_cast<double>(s.size(0)) / s.horizon();
  const int n = 400000;
  double ise = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * tmax / n;
    const auto lo = std::lower_bound(lags.begin(), lags.end(), t);
    const auto hi = std::lower_bound(lags.begin(), lags.end(), t + h);
    const double g = static_cast<double>(hi - lo) / (static_cast<double>(p.conditioning) * h) - rate;
    ise += (g - truth(t)) * (g - truth(t)) * tmax / n;
  }
  EXPECT_NEAR(integrated_squared_error(s, 0, 0, h, tmax, truth), ise, 1e-4 * ise);
}

TEST(Bandwidth, ThreadCountDoesNotChangeResults) {
  const EventSeries s = exp_events(5e4, 2);
  BandwidthConfig c;
  c.t_max = 20.0;
  c.threads = 1;
  const auto grid = geometric_grid(0.1, 5.0, 6);
  const BandwidthScan a = select_bandwidth(s, 0, 0, grid, c);
  c.threads = 3;
  const BandwidthScan b = select_bandwidth(s, 0, 0, grid, c);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.h_star, b.h_star);
  EXPECT_EQ(a.h_star, grid[a.best]);
  for (double v : a.values) EXPECT_GE(v, a.values[a.best]);
}

TEST(Bandwidth, ContrastIsBlockAverage) {
  const EventSeries s = exp_events(2e4, 3);
  BandwidthConfig c;
  c.t_max = 10.0;
  const auto blocks = block_contrasts(s, 0, 0, 1.0, c);
  ASSERT_EQ(blocks.size(), 10u);
  double avg = 0.0;
  for (double b : blocks) avg += b / 10.0;
  EXPECT_NEAR(contrast(s, 0, 0, 1.0, c), avg, 1e-15);
}

TEST(Bandwidth, ContrastTracksTheErrorCurve) {
  // M*(h) estimates int (g-hat - g)^2 - int g^2. Its level is noisy (the rate
  // fluctuates), so the test compares the drop between two bandwidths. The
  // leave-block-out estimates use 9/10 of the data, hence the ~1.11 ratio.
  const auto g = [](double t) { return 0.15 * std::exp(-0.1 * t); };
  BandwidthConfig c;
  c.t_max = 20.0;
  c.threads = 1;
  double d = 0.0, ds = 0.0;
  const int runs = 6;
  for (int r = 0; r < runs; ++r) {
    const EventSeries s = exp_events(2e5, 100 + static_cast<std::uint64_t>(r));
    const BandwidthScan scan = select_bandwidth(s, 0, 0, {0.05, 1.0}, c);
    d += (integrated_squared_error(s, 0, 0, 0.05, 20.0, g) - integrated_squared_error(s, 0, 0, 1.0, 20.0, g)) / runs;
    ds += (scan.values[0] - scan.values[1]) / runs;
  }
  EXPECT_GT(d, 0.0);
  EXPECT_NEAR(ds / d, 1.11, 0.25);
}

TEST(Bandwidth, RejectsBadGrid) {
  const EventSeries s = exp_events(1e4, 4);
  BandwidthConfig c;
  c.t_max = 10.0;
  EXPECT_THROW(select_bandwidth(s, 0, 0, {}, c), ConfigError);
  EXPECT_THROW(select_bandwidth(s, 0, 0, {1.0, 0.5}, c), ConfigError);
}

TEST(Bandwidth, EmptyBlocksWarn) {
  // Events only in the first three tenths of the window.
  ComponentEvents a;
  for (int k = 0; k < 1200; ++k) a.times.push_back(0.05 * k);
  const EventSeries s(200.0, {a});
  BandwidthConfig c;
  c.t_max = 2.0;
  int warnings = 0;
  ScopedWarningCapture capture([&](std::string_view) { ++warnings; });
  const auto blocks = block_contrasts(s, 0, 0, 0.5, c);
  EXPECT_GT(warnings, 0);
  EXPECT_TRUE(std::isnan(blocks.back()));
}
