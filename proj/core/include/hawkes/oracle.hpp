#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/model.hpp"

namespace hawkes {

struct OracleConfig {
  double horizon = 0.0;      // T_or: Psi and the correlation integrals live on [0, T_or]
  double step = 0.01;        // delta
  double output_horizon = 0; // g is reported on [-t_out, t_out]; 0 means T_or / 2
  double tol = 1e-13;        // Neumann sup-change tolerance
  int max_iterations = 20000;
};

/// Uniformly sampled D x D matrix function on t_k = k * step, k = 0..n.
struct MatrixSeries {
  int dim = 0;
  double step = 0.0;
  std::vector<std::vector<double>> series;  // series[i*D+j][k]

  std::size_t points() const noexcept { return series.empty() ? 0 : series.front().size(); }
  const std::vector<double>& at(int i, int j) const {
    return series[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
  }
  std::vector<double>& at(int i, int j) {
    return series[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
  }
};

struct PsiResult {
  MatrixSeries psi;
  int iterations = 0;
  double last_change = 0.0;
};

/// Phi sampled on the oracle grid (right limits at 0).
MatrixSeries sample_kernels(const HawkesModel& m, double step, std::size_t points);

/// Trapezoid convolution (a * b)(t_n) = step [sum_{m<=n} a_m b_{n-m} - a_0 b_n / 2 - a_n b_0 / 2].
std::vector<double> trapezoid_convolution(const std::vector<double>& a, const std::vector<double>& b, double step);

/// Psi_{n+1} = Phi + Phi * Psi_n until the sup-norm change drops below tol.
/// Throws StabilityError when rho >= 1, NumericalError on non-convergence.
PsiResult neumann_psi(const MatrixSeries& phi, double tol = 1e-13, int max_iterations = 20000);

/// Discrete residual max |Phi + Phi * Psi - Psi| over the grid.
double psi_identity_residual(const MatrixSeries& phi, const MatrixSeries& psi);

/// Ground-truth second-order quantities of a model whose mark functions are
/// piecewise constant on per-component bins (or One). For an unmarked model
/// every component has a single bin and G^{ij}_0 = g^{ij}.
struct OracleTable {
  int dim = 0;
  double step = 0.0;
  Eigen::VectorXd rates;
  std::vector<std::vector<double>> bin_edges;          // per component; empty: one bin
  std::vector<std::vector<double>> bin_probabilities;  // p^j_l
  MatrixSeries psi;
  // positive[i*D+j][l][k] = G^{ij}_l(t_k), right limit at t = 0
  std::vector<std::vector<std::vector<double>>> positive;
  // negative[i*D+j][k] = G^{ij}(-t_k), left limit at t = 0 (independent of the bin)
  std::vector<std::vector<double>> negative;
  int psi_iterations = 0;

  int bins(int j) const { return static_cast<int>(bin_probabilities[static_cast<std::size_t>(j)].size()); }
  std::size_t points() const noexcept { return negative.empty() ? 0 : negative.front().size(); }
  const std::vector<double>& G(int i, int j, int l) const;
  const std::vector<double>& G_negative(int i, int j) const;
  /// Mark-averaged g^{ij}(t) for t of either sign (linear interpolation).
  double g(int i, int j, double t) const;
  /// G^{ij}_l(t) for t >= 0.
  double G_at(int i, int j, int l, double t) const;
};

/// g(t) = Psi(t) + Sigma Psi^T(-t) Sigma^{-1} + (Psi * Sigma Psi~^T)(t) Sigma^{-1}, Dirac parts dropped.
OracleTable oracle_g(const HawkesModel& m, const OracleConfig& c);

/// Mark functions replaced by their conditional means E[f(xi) | xi in bin l]
/// on the given per-component edges (end bins extend to infinity).
/// Components with empty edges keep a single bin.
HawkesModel project_marks(const HawkesModel& m, const std::vector<std::vector<double>>& edges);

/// Unmarked model of dimension sum_j M^j: sub-component (j,l) has baseline
/// mu^j p^j_l and kernel p^i_l f^{ik}_m phi^{ik} from (k,m).
struct MarkedEquivalent {
  HawkesModel model;
  std::vector<int> offset;                          // first sub-component of component j
  std::vector<std::vector<double>> probabilities;   // p^j_l
};

MarkedEquivalent marked_equivalent(const HawkesModel& m, const std::vector<std::vector<double>>& edges);

/// Bin edges on which the mark functions of component j are piecewise constant
/// (empty if all of them are One). Throws ConfigError for other mark functions.
std::vector<std::vector<double>> model_bins(const HawkesModel& m);

/// Closed forms for phi = alpha e^{-b t} in one dimension.
double exponential_psi(double alpha, double b, double t);
double exponential_g(double alpha, double b, double t);

/// CSV dump of g^{ij} on [-t_out, t_out] (one column per bin for t >= 0).
void write_oracle_csv(const std::string& path, const OracleTable& o, int i, int j);

}  // namespace hawkes
