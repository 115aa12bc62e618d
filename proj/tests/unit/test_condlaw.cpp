#include <cmath>

#include <gtest/gtest.h>

#include "hawkes/condlaw.hpp"
#include "hawkes/error.hpp"
#include "hawkes/simulate.hpp"

using namespace hawkes;

TEST(SmoothingKernel, Moments) {
  for (int order : {0, 1, 2}) {
    const SmoothingKernel k(order);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0, sq = 0.0;
    const int n = 200000;
    for (int s = 0; s < n; ++s) {
      const double u = (s + 0.5) / n, v = k(u);
      m0 += v / n;
      m1 += u * v / n;
      m2 += u * u * v / n;
      sq += v * v / n;
    }
    EXPECT_NEAR(m0, 1.0, 1e-9) << order;
    EXPECT_NEAR(m1, k.first_moment(), 1e-9) << order;
    if (order == 2) EXPECT_NEAR(m2, 0.0, 1e-9);
    EXPECT_NEAR(sq, k.l2_norm_squared(), 1e-8) << order;
  }
  EXPECT_DOUBLE_EQ(SmoothingKernel(1).l2_norm_squared(), 4.0);
  EXPECT_DOUBLE_EQ(SmoothingKernel(2).l2_norm_squared(), 9.0);
}

TEST(CondLaw, CollectLagsByHand) {
  ComponentEvents a{{1.0, 2.0, 4.0}, {}, false};
  const EventSeries s(10.0, {a});
  const PairLags p = collect_lags(s, 0, 0, 2.5, 3.0);
  EXPECT_EQ(p.conditioning, 2u);
  ASSERT_EQ(p.lags.size(), 2u);  // 1->2, 2->4 (self pairs excluded, 1->4 beyond reach)
  EXPECT_DOUBLE_EQ(p.lags[0], 1.0);
  EXPECT_DOUBLE_EQ(p.lags[1], 2.0);
}

TEST(CondLaw, BoxEstimateByHand) {
  // T - (tmax + h) = 2.5 keeps 0, 1, 1.5, 2 as conditioning events; rate 5 / 4.
  // Lags below tmax + h: 1 (from 0), 0.5 and 1 (from 1), 0.5 (from 1.5).
  ComponentEvents a{{0.0, 1.0, 1.5, 2.0, 3.9}, {}, false};
  const EventSeries s(4.0, {a});
  CondLawConfig c;
  c.h = 0.5;
  c.t_max = 1.0;
  c.step = 0.5;
  const CondLawEstimate e = estimate_g(s, 0, 0, c);
  ASSERT_EQ(e.conditioning, 4u);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_DOUBLE_EQ(e.values[0], 0.0 / 2.0 - 1.25);
  EXPECT_DOUBLE_EQ(e.values[1], 2.0 / 2.0 - 1.25);
  EXPECT_DOUBLE_EQ(e.values[2], 2.0 / 2.0 - 1.25);
  EXPECT_DOUBLE_EQ(e.centering_offset(), 0.25);
}

TEST(CondLaw, PoissonIsFlat) {
  HawkesModel::Spec sp;
  sp.baseline = Eigen::VectorXd::Constant(1, 1.0);
  sp.kernels = {Kernel()};
  SimConfig sc;
  sc.horizon = 2e5;
  sc.seed = 17;
  const EventSeries s = simulate(HawkesModel(std::move(sp)), sc).events;
  CondLawConfig c;
  c.h = 1.0;
  c.t_max = 10.0;
  const CondLawEstimate e = estimate_g(s, 0, 0, c);
  // Each bin sees ~ h J pairs: sd of g-hat ~ sqrt(1 / (J h)) ~ 2.2e-3.
  for (double v : e.values) EXPECT_NEAR(v, 0.0, 0.015);
}

TEST(CondLaw, MarkedBinsSumToUnmarked) {
  HawkesModel::Spec sp;
  sp.baseline = Eigen::VectorXd::Constant(1, 0.5);
  sp.kernels = {Kernel::exponential(0.25, 1.0)};
  sp.marks = {ExponentialMarks{1.0}};
  SimConfig sc;
  sc.horizon = 2e4;
  sc.seed = 4;
  const EventSeries s = simulate(HawkesModel(std::move(sp)), sc).events;
  CondLawConfig c;
  c.h = 0.5;
  c.t_max = 5.0;
  const MarkBins bins = mark_bin_probabilities(s, 0, {0.0, 0.5, 1.5, 20.0});
  const auto per_bin = estimate_G_marked(s, 0, 0, bins, c);
  const CondLawEstimate all = estimate_g(s, 0, 0, c);
  ASSERT_EQ(per_bin.size(), 3u);
  std::size_t jsum = 0;
  for (const auto& e : per_bin) jsum += e.conditioning;
  EXPECT_EQ(jsum, all.conditioning);
  for (std::size_t k = 0; k < all.size(); ++k) {
    double acc = 0.0;
    for (const auto& e : per_bin)
      acc += static_cast<double>(e.conditioning) / static_cast<double>(all.conditioning) * e.values[k];
    EXPECT_NEAR(acc, all.values[k], 1e-12);
  }
}

TEST(CondLaw, NegativeTimeRelation) {
  CondLawEstimate e;
  e.values = {1.0, 2.0};
  e.step = 0.5;
  const CondLawEstimate n = negative_time_g(e, 2.0, 4.0);
  EXPECT_TRUE(n.negative);
  EXPECT_DOUBLE_EQ(n.values[1], 1.0);
}

TEST(CondLaw, EdgeRules) {
  ComponentEvents a{{1.0}, {}, false};
  const EventSeries s(10.0, {a});
  CondLawConfig c;
  c.h = 0.0;
  c.t_max = 1.0;
  EXPECT_THROW(estimate_g(s, 0, 0, c), ConfigError);
  c.h = 1.0;
  c.t_max = 9.5;
  EXPECT_THROW(estimate_g(s, 0, 0, c), ConfigError);
}

TEST(CondLaw, TrapezoidPrimitive) {
  const auto p = trapezoid_primitive({0.0, 1.0, 2.0}, 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
  EXPECT_DOUBLE_EQ(p[2], 1.0);
}
