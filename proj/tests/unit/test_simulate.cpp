#include <cmath>

#include <gtest/gtest.h>

#include "hawkes/error.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"

using namespace hawkes;

namespace {

HawkesModel exp_1d() {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.05);
  s.kernels = {Kernel::exponential(0.1, 0.2)};
  return HawkesModel(std::move(s));
}

}  // namespace

TEST(Rng, SplitMixReferenceOutput) {
  // First outputs of SplitMix64 seeded with 0.
  SplitMix64 r(0);
  EXPECT_EQ(r.next(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(r.next(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(r.next(), 0x06C45D188009454Full);
}

TEST(Rng, UniformRange) {
  SplitMix64 r(7);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Simulate, Deterministic) {
  SimConfig c;
  c.horizon = 2e4;
  c.seed = 42;
  const SimResult a = simulate(exp_1d(), c), b = simulate(exp_1d(), c);
  EXPECT_EQ(a.events.times(0), b.events.times(0));
  c.seed = 43;
  EXPECT_NE(simulate(exp_1d(), c).events.times(0), a.events.times(0));
}

TEST(Simulate, MeanCountMatchesRate) {
  // Lambda = 0.1; Var N(T) ~ T mu / (1 - rho)^3 = 0.4 T.
  SimConfig c;
  c.horizon = 2e5;
  c.seed = 3;
  const SimResult r = simulate(exp_1d(), c);
  const double n = static_cast<double>(r.events.size(0));
  EXPECT_NEAR(n, 2e4, 5.0 * std::sqrt(0.4 * c.horizon));
  EXPECT_DOUBLE_EQ(r.events.horizon(), c.horizon);
  EXPECT_GE(r.events.times(0).front(), 0.0);
}

TEST(Simulate, PoissonComponents) {
  HawkesModel::Spec s;
  s.baseline = Eigen::Vector2d(0.1, 0.2);
  s.kernels.assign(4, Kernel());
  SimConfig c;
  c.horizon = 1e5;
  c.seed = 9;
  const SimResult r = simulate(HawkesModel(std::move(s)), c);
  EXPECT_NEAR(static_cast<double>(r.events.size(0)), 1e4, 5.0 * 100.0);
  EXPECT_NEAR(static_cast<double>(r.events.size(1)), 2e4, 5.0 * std::sqrt(2e4));
}

TEST(Simulate, BurnInDefault) {
  // ln(1/0.01) / 0.2
  EXPECT_NEAR(simulation_support(Kernel::exponential(0.1, 0.2), 1e-2), std::log(100.0) / 0.2, 1e-12);
  EXPECT_NEAR(default_burn_in(exp_1d()), 10.0 * std::log(100.0) / 0.2, 1e-9);
  EXPECT_DOUBLE_EQ(simulation_support(Kernel::piecewise_linear({{1.0, 0.0}, {2.0, 0.5}, {3.0, 0.0}}), 1e-2), 3.0);
}

TEST(Simulate, MarksFollowTheLaw) {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.5);
  s.kernels = {Kernel::exponential(0.2, 1.0)};
  s.marks = {ExponentialMarks{2.0}};
  s.mark_functions = {MarkFunction::identity()};
  SimConfig c;
  c.horizon = 2e4;
  c.seed = 11;
  const SimResult r = simulate(HawkesModel(std::move(s)), c);
  const auto& m = r.events.marks(0);
  ASSERT_EQ(m.size(), r.events.size(0));
  double mean = 0.0;
  for (double x : m) mean += x;
  mean /= static_cast<double>(m.size());
  EXPECT_NEAR(mean, 2.0, 5.0 * 2.0 / std::sqrt(static_cast<double>(m.size())));
}

TEST(Simulate, RectifiedInhibition) {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 1.0);
  s.kernels = {Kernel::piecewise_linear({{0.0, -0.8}, {1.0, -0.8}, {1.5, 0.0}})};
  s.rectified = true;
  SimConfig c;
  c.horizon = 1e4;
  c.seed = 5;
  const SimResult r = simulate(HawkesModel(std::move(s)), c);
  EXPECT_LT(r.min_raw_intensity, 0.0);
  EXPECT_GE(r.min_intensity, 0.0);
  EXPECT_LT(static_cast<double>(r.events.size(0)), 1e4);
}

TEST(Simulate, EventCap) {
  SimConfig c;
  c.horizon = 1e6;
  c.seed = 1;
  c.max_events = 100;
  EXPECT_THROW(simulate(exp_1d(), c), DivergenceError);
}

TEST(Simulate, RecordsIntensity) {
  SimConfig c;
  c.horizon = 1e3;
  c.seed = 2;
  c.record_intensity = true;
  const SimResult r = simulate(exp_1d(), c);
  ASSERT_EQ(r.intensity[0].size(), r.events.size(0));
  for (double l : r.intensity[0]) EXPECT_GE(l, 0.05 - 1e-15);
}
