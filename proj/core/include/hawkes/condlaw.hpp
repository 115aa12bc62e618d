#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hawkes/events.hpp"

namespace hawkes {

/// Polynomial smoothing kernel on [0, 1) with vanishing moments 1..order.
///   order 0: K(u) = 1
///   order 1: K(u) = 4 - 6u
///   order 2: K(u) = 9 - 36u + 30u^2
class SmoothingKernel {
 public:
  explicit SmoothingKernel(int order = 0);

  double operator()(double u) const;
  int order() const noexcept { return order_; }
  /// c_p with K(u) = sum_p c_p u^p on [0, 1)
  std::vector<double> coefficients() const;
  /// integral of u K(u) over [0, 1]
  double first_moment() const noexcept { return order_ == 0 ? 0.5 : 0.0; }
  /// integral of K(u)^2 over [0, 1]
  double l2_norm_squared() const noexcept;

 private:
  int order_;
};

struct CondLawConfig {
  double h = 0.0;       // bandwidth
  double t_max = 0.0;   // estimation horizon A
  double step = 0.0;    // grid step; 0 means h / 2
  SmoothingKernel kernel{};

  double grid_step() const { return step > 0.0 ? step : 0.5 * h; }
};

/// Grid estimate of g^{ij}(t) (or G^{ij}_l(t) for mark bin l) on t_k = k * step.
struct CondLawEstimate {
  int i = 0;
  int j = 0;
  int bin = -1;                  // -1: all marks
  bool negative = false;         // values live on -t_k (reflected estimate)
  double h = 0.0;
  double step = 0.0;
  double kernel_first_moment = 0.0;
  std::vector<double> values;           // g-hat(t_k), rate already subtracted
  std::vector<double> primitive;        // trapezoid integral of values from 0 to t_k
  std::vector<double> count_primitive;  // pairs with lag in [0, t_k] / J - rate_i t_k
  double rate_i = 0.0;
  double rate_j = 0.0;
  std::size_t conditioning = 0;  // J (or J_l) after the edge exclusion
  bool degenerate = false;       // no conditioning events

  std::size_t size() const noexcept { return values.size(); }
  double t(std::size_t k) const noexcept { return static_cast<double>(k) * step; }
  double t_max() const noexcept { return values.empty() ? 0.0 : t(values.size() - 1); }
  /// h * integral of u K(u): the estimate at t_k targets g near t_k + offset.
  double centering_offset() const noexcept { return h * kernel_first_moment; }
  /// Linear interpolation of the grid values (no centering), clamped to the grid.
  double value_at(double t) const;
};

/// Pair lags between conditioning events of j and events of i.
struct PairLags {
  std::vector<double> lags;            // u - t_n, within [0, max_lag)
  std::vector<std::uint32_t> source;   // index n of the conditioning event
  std::size_t conditioning = 0;        // events of j used as conditioning events
};

/// Lags u - t_n in [0, max_lag) for conditioning events t_n <= last_conditioning
/// of component j and events u of component i; self-pairs excluded.
PairLags collect_lags(const EventSeries& s, int i, int j, double max_lag, double last_conditioning);

/// Kernel-smoothed estimate with the edge policy: conditioning events later
/// than T - (t_max + h) are dropped. Throws ConfigError if h <= 0 or t_max + h > T.
CondLawEstimate estimate_g(const EventSeries& s, int i, int j, const CondLawConfig& c);

/// One estimate per bin of the marks of component j.
std::vector<CondLawEstimate> estimate_G_marked(const EventSeries& s, int i, int j, const MarkBins& bins,
                                               const CondLawConfig& c);

/// g^{ij}(-t) = (rate_i / rate_j) g^{ji}(t) from an estimate of g^{ji}.
CondLawEstimate negative_time_g(const CondLawEstimate& est_ji, double rate_i, double rate_j);

/// Trapezoid cumulative integral on a uniform grid.
std::vector<double> trapezoid_primitive(const std::vector<double>& values, double step);

/// CSV dump: t, value, primitive, count_primitive.
void write_condlaw_csv(const std::string& path, const CondLawEstimate& e);

}  // namespace hawkes
