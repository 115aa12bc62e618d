#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/events.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

struct GofConfig {
  /// Kernels without finite support are truncated where the remaining mass is
  /// below this fraction of their norm (power laws only; exponentials are exact).
  double tail_fraction = 1e-6;
  /// Use only the last n rescaled times per component (0: all).
  std::size_t last = 0;
  /// The KS test is refused below this many residuals.
  std::size_t min_events = 100;
  std::size_t qq_levels = 99;
};

/// lambda^j(t-) at every event of component j, per component.
std::vector<std::vector<double>> reconstruct_intensity(const HawkesModel& m, const EventSeries& s,
                                                       const GofConfig& c = GofConfig{});

/// Intensity of component j at time t given events strictly before t (clamped when rectified).
double intensity(const HawkesModel& m, const EventSeries& s, int j, double t, const GofConfig& c = GofConfig{});

struct ComponentResiduals {
  std::vector<double> tau;              // tau_k = int_{t_{k-1}}^{t_k} lambda, k >= 1
  std::vector<std::size_t> zero;        // indices with tau == 0 (intensity vanished)
  bool tested = false;                  // false when fewer than min_events residuals
  double ks_statistic = 0.0;
  double p_value = 0.0;
  double mean = 0.0;
  std::vector<std::pair<double, double>> qq;  // (exponential quantile, empirical quantile)
  double max_qq_deviation = 0.0;
};

struct ResidualSet {
  std::vector<ComponentResiduals> components;
};

/// Time-rescaled inter-event times with KS statistics against Exp(1).
ResidualSet rescale(const HawkesModel& m, const EventSeries& s, const GofConfig& c = GofConfig{});

/// Residual statistics for a given set of tau values (applies c.last and c.min_events).
ComponentResiduals summarize_residuals(std::vector<double> tau, const GofConfig& c = GofConfig{});

/// KS distance between the empirical law of x and Exp(1).
double ks_exponential(std::vector<double> x);

/// Asymptotic Kolmogorov survival function P(sqrt(n) D > lambda).
double kolmogorov_survival(double lambda);

/// CSV of Q-Q pairs and a text summary per component.
void write_qq_csv(const std::string& path, const ComponentResiduals& r);
std::string gof_report(const ResidualSet& r);

}  // namespace hawkes
