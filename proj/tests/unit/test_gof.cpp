#include <cmath>

#include <gtest/gtest.h>

#include "hawkes/gof.hpp"
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

TEST(Gof, KolmogorovSurvival) {
  EXPECT_NEAR(kolmogorov_survival(1.0), 0.26999967167735456, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(1.3580986393225507), 0.05, 1e-9);
  EXPECT_DOUBLE_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(Gof, KsOnExactQuantiles) {
  std::vector<double> x;
  const int n = 1000;
  for (int k = 0; k < n; ++k) x.push_back(-std::log1p(-(k + 0.5) / n));
  EXPECT_NEAR(ks_exponential(x), 0.5 / n, 1e-12);
}

TEST(Gof, IntensityByHand) {
  ComponentEvents a{{1.0, 2.0}, {}, false};
  const EventSeries s(5.0, {a});
  const double expected = 0.05 + 0.1 * std::exp(-0.4) + 0.1 * std::exp(-0.2);
  EXPECT_NEAR(intensity(exp_1d(), s, 0, 3.0), expected, 1e-15);
  EXPECT_NEAR(intensity(exp_1d(), s, 0, 2.0), 0.05 + 0.1 * std::exp(-0.2), 1e-15);
}

TEST(Gof, CompensatorByHand) {
  ComponentEvents a{{1.0, 2.0, 4.0}, {}, false};
  const EventSeries s(5.0, {a});
  GofConfig c;
  c.min_events = 1;
  const ResidualSet r = rescale(exp_1d(), s, c);
  const auto& tau = r.components[0].tau;
  ASSERT_EQ(tau.size(), 2u);
  EXPECT_NEAR(tau[0], 0.05 + 0.5 * (1.0 - std::exp(-0.2)), 1e-14);
  const double t2 = 0.05 * 2.0 + 0.5 * (std::exp(-0.2) - std::exp(-0.6)) + 0.5 * (1.0 - std::exp(-0.4));
  EXPECT_NEAR(tau[1], t2, 1e-14);
}

TEST(Gof, TrueModelPasses) {
  SimConfig c;
  c.horizon = 5e4;
  c.seed = 21;
  const EventSeries s = simulate(exp_1d(), c).events;
  const ResidualSet r = rescale(exp_1d(), s);
  const auto& comp = r.components[0];
  EXPECT_TRUE(comp.tested);
  EXPECT_GT(comp.p_value, 1e-3);
  EXPECT_NEAR(comp.mean, 1.0, 0.05);
  EXPECT_LT(comp.max_qq_deviation, 0.5);
}

TEST(Gof, WrongModelFails) {
  SimConfig c;
  c.horizon = 5e4;
  c.seed = 22;
  const EventSeries s = simulate(exp_1d(), c).events;
  HawkesModel::Spec p;
  p.baseline = Eigen::VectorXd::Constant(1, 0.1);
  p.kernels = {Kernel()};
  const ResidualSet r = rescale(HawkesModel(std::move(p)), s);
  EXPECT_LT(r.components[0].p_value, 1e-6);
}

TEST(Gof, LastAndMinimum) {
  std::vector<double> tau(50, 1.0);
  GofConfig c;
  const ComponentResiduals few = summarize_residuals(tau, c);
  EXPECT_FALSE(few.tested);
  tau.assign(500, 1.0);
  c.last = 120;
  const ComponentResiduals r = summarize_residuals(tau, c);
  EXPECT_EQ(r.tau.size(), 120u);
  EXPECT_TRUE(r.tested);
}
