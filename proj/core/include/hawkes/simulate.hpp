#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hawkes/events.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

struct SimConfig {
  double horizon = 0.0;
  std::uint64_t seed = 0;
  /// Discarded prefix; defaults to 10 x the longest kernel support.
  std::optional<double> burn_in;
  /// Kernels with unbounded support (power laws) are cut where the remaining
  /// mass falls below this fraction of the norm. Exponentials are never cut.
  double tail_fraction = 1e-2;
  std::size_t max_events = 50'000'000;
  /// Keep lambda^j(t-) at every accepted event of component j.
  bool record_intensity = false;
};

struct SimResult {
  EventSeries events;
  double burn_in = 0.0;
  std::size_t candidates = 0;
  std::size_t accepted = 0;          // including the burn-in prefix
  double min_intensity = 0.0;        // min over candidates of the (clamped) total intensity
  double min_raw_intensity = 0.0;    // same before clamping; negative only for rectified models
  std::vector<std::vector<double>> intensity;  // per component, aligned with events.times(j)
};

/// Support length used for burn-in and for windowing: the support end for
/// finite kernels, the tail cut for power laws, ln(1/tail) / decay for exponentials.
double simulation_support(const Kernel& k, double tail_fraction);

double default_burn_in(const HawkesModel& m, double tail_fraction = 1e-2);

/// Ogata thinning on [0, burn_in + T]; the prefix is dropped and times are
/// shifted so that the returned series lives on [0, T].
SimResult simulate(const HawkesModel& m, const SimConfig& c);

}  // namespace hawkes
