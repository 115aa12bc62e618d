#include <cmath>

#include <gtest/gtest.h>

#include "hawkes/error.hpp"
#include "hawkes/estimate.hpp"
#include "hawkes/oracle.hpp"
#include "hawkes/whsolver.hpp"

using namespace hawkes;

TEST(Quadrature, ThreePointRule) {
  const Quadrature q = gauss_nodes(3, 2.0);
  const double d = std::sqrt(0.6);
  EXPECT_NEAR(q.nodes[0], 1.0 - d, 1e-15);
  EXPECT_NEAR(q.nodes[1], 1.0, 1e-15);
  EXPECT_NEAR(q.nodes[2], 1.0 + d, 1e-15);
  EXPECT_NEAR(q.weights[0], 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(q.weights[1], 8.0 / 9.0, 1e-15);
}

TEST(Quadrature, ExactToDegree2QMinus1) {
  for (int Q : {1, 2, 7, 30, 64, 128}) {
    const Quadrature q = gauss_nodes(Q, 3.0);
    double sw = 0.0;
    for (double w : q.weights) sw += w;
    EXPECT_NEAR(sw, 3.0, 1e-13) << Q;
    for (int d = 1; d <= 2 * Q - 1; d += 2) {
      double s = 0.0;
      for (int k = 0; k < Q; ++k) s += q.weights[k] * std::pow(q.nodes[k] / 3.0, d);
      EXPECT_NEAR(s, 3.0 / (d + 1), 1e-12) << Q << " " << d;
    }
  }
  EXPECT_THROW(gauss_nodes(0, 1.0), ConfigError);
}

TEST(WienerHopf, RecoversExponentialFromOracle) {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.05);
  s.kernels = {Kernel::exponential(0.1, 0.2)};
  const HawkesModel m(std::move(s));
  OracleConfig c;
  c.horizon = 400.0;
  c.step = 0.01;
  c.output_horizon = 41.0;
  const auto input = oracle_input(oracle_g(m, c), 40.0);
  const NystromSolution sol = solve_wiener_hopf(input, 30);
  double num = 0.0, den = 0.0;
  for (int q = 0; q < 30; ++q) {
    const double t = sol.quad.nodes[q], w = sol.quad.weights[q];
    const double err = sol.combined_values(0, 0)(q) - 0.1 * std::exp(-0.2 * t);
    num += w * err * err;
    den += w * 0.01 * std::exp(-0.4 * t);
  }
  EXPECT_LT(std::sqrt(num / den), 1e-3);
  EXPECT_NEAR(sol.norms(0, 0), 0.5 * (1.0 - std::exp(-8.0)), 1e-3);
  EXPECT_TRUE(sol.stable);
  const Eigen::VectorXd mu = estimated_baseline(sol.norms, input->rates);
  EXPECT_NEAR(mu(0), 0.05, 1e-3);
}

TEST(WienerHopf, ResampleKeepsNodeValues) {
  HawkesModel::Spec s;
  s.baseline = Eigen::VectorXd::Constant(1, 0.05);
  s.kernels = {Kernel::exponential(0.1, 0.2)};
  OracleConfig c;
  c.horizon = 200.0;
  c.step = 0.02;
  c.output_horizon = 21.0;
  const auto input = oracle_input(oracle_g(HawkesModel(std::move(s)), c), 20.0);
  const NystromSolution sol = solve_wiener_hopf(input, 12);
  const std::vector<double> nodes(sol.quad.nodes.begin(), sol.quad.nodes.end());
  const ResampledKernels r = resample(sol, nodes);
  for (int q = 0; q < 12; ++q) EXPECT_NEAR(r.kernel(0, 0)[q], sol.combined_values(0, 0)(q), 1e-14);
}

TEST(WienerHopf, ValidatesInput) {
  auto in = std::make_shared<WHInput>();
  in->dim = 1;
  in->horizon = 5.0;
  in->rates = Eigen::VectorXd::Constant(1, 1.0);
  in->bin_probs = {{1.0}};
  in->G = {{GridFunction(0.0, 0.5, std::vector<double>(5, 0.0))}};  // covers [0, 2] only
  EXPECT_THROW(in->validate(), ConfigError);
}

TEST(QSelection, StopsAtThreshold) {
  // Synthetic pipeline converging like 2^(-Q/4).
  const auto pipeline = [](int Q) {
    ResampledKernels k;
    k.dim = 1;
    k.grid = {0.0, 1.0};
    k.combined = {{1.0 + std::pow(2.0, -Q / 4.0), 1.0}};
    return k;
  };
  const QSelection s = select_Q(pipeline, 4, 0.01, 128);
  EXPECT_TRUE(s.converged);
  EXPECT_LE(s.R, 0.01);
  EXPECT_EQ(s.Q, s.history.back().first);
  for (std::size_t k = 1; k < s.history.size(); ++k) EXPECT_EQ(s.history[k].first, 2 * s.history[k - 1].first);
}

TEST(QSelection, Cap) {
  const auto pipeline = [](int Q) {
    ResampledKernels k;
    k.dim = 1;
    k.grid = {0.0};
    k.combined = {{static_cast<double>(Q % 2 ? 1 : 2) + Q}};
    return k;
  };
  const QSelection s = select_Q(pipeline, 16, 1e-6, 64);
  EXPECT_FALSE(s.converged);
  EXPECT_LE(s.Q, 64);
}

TEST(WienerHopf, UniformGrid) {
  const auto g = uniform_grid(2.0, 5);
  EXPECT_EQ(g, (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
}
