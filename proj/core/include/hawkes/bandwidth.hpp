#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hawkes/condlaw.hpp"
#include "hawkes/events.hpp"

namespace hawkes {

struct BandwidthConfig {
  double t_max = 0.0;
  int blocks = 10;  // R
  SmoothingKernel kernel{};
  unsigned threads = 0;
  bool leave_out_rate = true;   // Lambda-hat in the contrast taken without block r
  bool pooled_queries = true;   // query sums divided by J / R instead of J_r
};

struct BandwidthScan {
  std::vector<double> grid;                       // strictly increasing
  std::vector<double> values;                     // M*(h_k)
  std::vector<std::vector<double>> block_values;  // C_(r)(h_k), NaN for excluded blocks
  double h_star = 0.0;
  std::size_t best = 0;
};

/// Cross-validated contrast M*(h): the average over R equal time blocks of
///   int_0^tmax (g_(r)^2 + 2 Lambda g_(r)) - (2 / J_r) sum_{lags in block r, 0 < lag <= tmax} g_(r)(lag)
/// where g_(r) is the leave-block-out estimate. By default Lambda is the rate
/// outside block r and J_r is replaced by J / R (see BandwidthConfig). Conditioning events later than
/// T - (tmax + h) are dropped, as in estimate_g. The integrals are exact for the
/// piecewise-polynomial estimate. Blocks with J_r = 0 are skipped with a warning.
double contrast(const EventSeries& s, int i, int j, double h, const BandwidthConfig& c);

/// Per-block contrasts C_(r)(h) (NaN for skipped blocks).
std::vector<double> block_contrasts(const EventSeries& s, int i, int j, double h, const BandwidthConfig& c);

/// Evaluates M* on the grid and returns the argmin (ties go to the smaller h).
BandwidthScan select_bandwidth(const EventSeries& s, int i, int j, const std::vector<double>& grid,
                               const BandwidthConfig& c);

/// n points lo * (hi/lo)^(k/(n-1)).
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// 16 geometric points on [min(dt_med / 4, tmax / 400), tmax / 4], dt_med being
/// the median gap of the pooled series.
std::vector<double> default_h_grid(const EventSeries& s, double t_max, std::size_t n = 16);

/// Exact int_0^tmax (g_hat - truth)^2 for the full-sample estimate of estimate_g
/// (with the tmax + h edge reach), truth integrated by 3-point Gauss rules.
double integrated_squared_error(const EventSeries& s, int i, int j, double h, double t_max,
                                const std::function<double(double)>& truth, const SmoothingKernel& kernel = SmoothingKernel{});

/// CSV of h, M*(h).
void write_bandwidth_csv(const std::string& path, const BandwidthScan& scan);

}  // namespace hawkes
