#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/bandwidth.hpp"
#include "hawkes/condlaw.hpp"
#include "hawkes/events.hpp"
#include "hawkes/model.hpp"
#include "hawkes/oracle.hpp"
#include "hawkes/whsolver.hpp"

namespace hawkes {

enum class PrimitiveMode { Count, Trapezoid };

struct EstimationConfig {
  double t_max = 0.0;  // A: kernels are estimated on [0, t_max]
  double h = 0.0;      // 0: cross-validated bandwidth per (i, j)
  int Q = 0;           // 0: doubling selection from Q0
  int Q0 = 16;
  int Q_cap = 128;
  double Q_threshold = 0.01;
  /// Per-component mark-bin edges; an empty entry (or an empty list) means a single bin.
  std::vector<std::vector<double>> bin_edges;
  int kernel_order = 0;
  PrimitiveMode primitive = PrimitiveMode::Count;
  std::vector<double> h_grid;  // candidates for the automatic bandwidth; empty: default_h_grid
  int blocks = 10;             // R for the contrast
  std::size_t grid_points = 0; // output grid on [0, t_max]; 0: 8 Q + 1
  double rcond_threshold = 1e-13;
  unsigned threads = 0;
};

struct EstimationResult {
  EstimationConfig config;  // with Q and the grid size resolved
  Eigen::VectorXd rates;    // Lambda-hat
  std::vector<MarkBins> bins;
  Eigen::MatrixXd h;        // bandwidth used for each (i, j)
  std::vector<BandwidthScan> scans;  // per (i, j) when h was automatic
  std::optional<QSelection> q_selection;
  NystromSolution solution;
  ResampledKernels kernels;
  Eigen::VectorXd baseline;  // (I - ||phi||) Lambda
};

/// Conditional-law estimates turned into solver input. Values at t_k are placed
/// at t_k + h * int u K(u) du (the kernel's centre of mass); the primitive is the
/// exact pair-count primitive or the trapezoid of the values.
std::shared_ptr<WHInput> build_input(const EventSeries& s, const std::vector<MarkBins>& bins, const Eigen::MatrixXd& h,
                                     const EstimationConfig& c);

/// Solver input made from an oracle table (ground-truth G on a fine grid).
std::shared_ptr<WHInput> oracle_input(const OracleTable& o, double A);

/// Mark bins per component from the configured edges (single bin when none),
/// with empty bins merged into their neighbours.
std::vector<MarkBins> resolve_bins(const EventSeries& s, const EstimationConfig& c);

/// Full pipeline: rates, bins, conditional laws, bandwidth and Q selection,
/// Nystrom solve, combination, stability check, mark levels and resampling.
EstimationResult estimate(const EventSeries& s, const EstimationConfig& c);

/// mu-hat = (I - ||phi-hat||) Lambda-hat.
Eigen::VectorXd estimated_baseline(const Eigen::MatrixXd& norms, const Eigen::VectorXd& rates);

/// Model made of the resampled kernels (sampled shapes), the estimated mark
/// levels (undefined levels read as 1, negative ones as 0) and the empirical
/// mark laws. Rectified whenever a kernel or baseline is negative.
HawkesModel estimated_model(const EstimationResult& r, const EventSeries& s);

}  // namespace hawkes
