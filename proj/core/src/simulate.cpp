#include "hawkes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Past {
  double t;
  double mark;
};

double draw_mark(const MarkDistribution& d, SplitMix64& rng) {
  if (const auto* e = std::get_if<ExponentialMarks>(&d)) return rng.exponential(1.0 / e->mean);
  if (const auto* e = std::get_if<EmpiricalMarks>(&d)) return (*e->samples)[rng.below(e->samples->size())];
  return 0.0;
}

// Kernel pair bookkeeping. Exponential pairs are carried by the recursion
// S(t) = sum_s f(xi_s) alpha e^{-b (t - s)}; every other nonzero pair is
// evaluated over the sliding window of its source component.
struct Pair {
  enum class Kind { Zero, Exponential, Window } kind = Kind::Zero;
  double alpha = 0.0;
  double decay = 0.0;
  double cut = 0.0;     // window length (support or tail cut)
  double state = 0.0;   // exponential recursion value at the current time
};

}  // namespace

double simulation_support(const Kernel& k, double tail_fraction) {
  if (k.is_zero()) return 0.0;
  const double end = k.support_end();
  if (std::isfinite(end)) return end;
  return k.effective_support(tail_fraction);
}

double default_burn_in(const HawkesModel& m, double tail_fraction) {
  double s = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) s = std::max(s, simulation_support(m.kernel(i, j), tail_fraction));
  return 10.0 * s;
}

SimResult simulate(const HawkesModel& m, const SimConfig& c) {
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) throw ConfigError("simulation horizon must be finite and > 0");
  const double burn_in = c.burn_in ? *c.burn_in : default_burn_in(m, c.tail_fraction);
  if (!(burn_in >= 0.0) || !std::isfinite(burn_in)) throw ConfigError("burn-in must be finite and >= 0");

  const int d = m.dim();
  const auto D = static_cast<std::size_t>(d);
  {
    const NormMatrix n = m.rectified() ? absolute_norm_matrix(m) : norm_matrix(m);
    if (n.spectral_radius >= 1.0) {
      std::ostringstream msg;
      msg << "spectral radius " << n.spectral_radius << " >= 1"
          << (m.rectified() ? " (rectified model; the clamp may still keep it finite)"
                            : "; the simulation will stop at the event cap");
      warn(msg.str());
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (m.mark_function(i, j).kind() == MarkFunction::Kind::Identity && m.marked(j)) {
        const auto& dist = m.mark_distribution(j);
        if (const auto* e = std::get_if<EmpiricalMarks>(&dist))
          for (double x : *e->samples)
            if (x < 0.0) throw ConfigError("identity mark function with negative marks cannot be simulated");
      }

  std::vector<Pair> pairs(D * D);
  std::vector<double> window_len(D, 0.0);
  bool truncated = false;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Kernel& k = m.kernel(i, j);
      auto& p = pairs[static_cast<std::size_t>(i) * D + static_cast<std::size_t>(j)];
      if (k.is_zero()) continue;
      if (const auto* e = std::get_if<ExponentialKernel>(&k.shape())) {
        p.kind = Pair::Kind::Exponential;
        p.alpha = e->amplitude;
        p.decay = e->decay;
        continue;
      }
      p.kind = Pair::Kind::Window;
      p.cut = simulation_support(k, c.tail_fraction);
      if (!std::isfinite(k.support_end())) truncated = true;
      window_len[static_cast<std::size_t>(j)] = std::max(window_len[static_cast<std::size_t>(j)], p.cut);
    }
  }
  if (truncated) {
    std::ostringstream msg;
    msg << "unbounded kernel support cut where the remaining mass is below " << c.tail_fraction << " of the norm";
    warn(msg.str());
  }

  SplitMix64 rng(c.seed);
  const double end = burn_in + c.horizon;
  std::vector<std::deque<Past>> window(D);
  std::vector<ComponentEvents> out(D);
  std::vector<std::vector<double>> trace(D);
  for (std::size_t j = 0; j < D; ++j) out[j].marked = m.marked(static_cast<int>(j));

  SimResult res;
  res.burn_in = burn_in;
  res.min_intensity = kInf;
  res.min_raw_intensity = kInf;

  std::vector<double> lambda(D, 0.0);
  double t = 0.0;
  double state_time = 0.0;

  auto advance_states = [&](double to) {
    const double dt = to - state_time;
    if (dt <= 0.0) return;
    for (auto& p : pairs)
      if (p.kind == Pair::Kind::Exponential && p.state != 0.0) p.state *= std::exp(-p.decay * dt);
    state_time = to;
  };

  auto trim_windows = [&](double now) {
    for (std::size_t j = 0; j < D; ++j) {
      auto& w = window[j];
      while (!w.empty() && now - w.front().t >= window_len[j]) w.pop_front();
    }
  };

  // Dominating rate for the total intensity on [now, next acceptance).
  auto bound_at = [&](double now) {
    double b = 0.0;
    for (int i = 0; i < d; ++i) {
      double bi = std::max(m.baseline()(i), 0.0);
      for (int j = 0; j < d; ++j) {
        const auto& p = pairs[static_cast<std::size_t>(i) * D + static_cast<std::size_t>(j)];
        if (p.kind == Pair::Kind::Exponential) {
          bi += std::max(p.state, 0.0);
        } else if (p.kind == Pair::Kind::Window) {
          const Kernel& k = m.kernel(i, j);
          const MarkFunction& f = m.mark_function(i, j);
          for (const auto& e : window[static_cast<std::size_t>(j)]) {
            const double tau = now - e.t;
            if (tau >= p.cut) continue;
            bi += f(e.mark) * k.remaining_max(tau);
          }
        }
      }
      b += bi;
    }
    return b;
  };

  auto intensities_at = [&](double now) {
    double raw_min = kInf;
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      double li = m.baseline()(i);
      for (int j = 0; j < d; ++j) {
        const auto& p = pairs[static_cast<std::size_t>(i) * D + static_cast<std::size_t>(j)];
        if (p.kind == Pair::Kind::Exponential) {
          li += p.state;
        } else if (p.kind == Pair::Kind::Window) {
          const Kernel& k = m.kernel(i, j);
          const MarkFunction& f = m.mark_function(i, j);
          for (const auto& e : window[static_cast<std::size_t>(j)]) {
            const double tau = now - e.t;
            if (tau >= p.cut) continue;
            li += f(e.mark) * k(tau);
          }
        }
      }
      raw_min = std::min(raw_min, li);
      if (m.rectified()) li = std::max(li, 0.0);
      lambda[static_cast<std::size_t>(i)] = li;
      total += li;
    }
    return std::pair{total, raw_min};
  };

  for (;;) {
    trim_windows(t);
    advance_states(t);
    const double bound = bound_at(t);
    if (!(bound > 0.0)) break;  // no further events possible
    const double cand = t + rng.exponential(bound);
    if (cand > end) break;
    t = cand;
    ++res.candidates;
    trim_windows(t);
    advance_states(t);
    const auto [total, raw_min] = intensities_at(t);
    res.min_intensity = std::min(res.min_intensity, total);
    res.min_raw_intensity = std::min(res.min_raw_intensity, raw_min);
    if (total > bound * (1.0 + 1e-9) + 1e-300) {
      std::ostringstream msg;
      msg << "thinning bound " << bound << " below the intensity " << total << " at t = " << t;
      throw NumericalError(msg.str());
    }
    const double u = rng.uniform() * bound;
    if (u >= total) continue;

    // Accept; pick the component by the intensity shares.
    std::size_t i = 0;
    double acc = lambda[0];
    while (u >= acc && i + 1 < D) acc += lambda[++i];
    const double mark = out[i].marked ? draw_mark(m.mark_distribution(static_cast<int>(i)), rng) : 0.0;

    if (++res.accepted > c.max_events) {
      std::ostringstream msg;
      msg << "simulation exceeded the event cap of " << c.max_events << " events by t = " << t
          << "; the model is likely unstable";
      throw DivergenceError(msg.str());
    }
    if (t > burn_in) {
      out[i].times.push_back(t - burn_in);
      if (out[i].marked) out[i].marks.push_back(mark);
      if (c.record_intensity) trace[i].push_back(lambda[i]);
    }
    for (std::size_t k = 0; k < D; ++k) {
      auto& p = pairs[k * D + i];
      if (p.kind == Pair::Kind::Exponential)
        p.state += m.mark_function(static_cast<int>(k), static_cast<int>(i))(mark) * p.alpha;
    }
    if (window_len[i] > 0.0) window[i].push_back(Past{t, mark});
  }

  // Shifted times may collide with the horizon by rounding; keep them inside.
  for (auto& comp : out)
    for (auto& x : comp.times) x = std::min(x, c.horizon);
  for (auto& comp : out) {
    auto keep = std::adjacent_find(comp.times.begin(), comp.times.end(),
                                   [](double a, double b) { return !(b > a); });
    if (keep != comp.times.end()) throw NumericalError("simulation produced coincident event times after shifting");
  }

  res.events = EventSeries(c.horizon, std::move(out));
  if (c.record_intensity) res.intensity = std::move(trace);
  if (res.candidates == 0) res.min_intensity = res.min_raw_intensity = 0.0;
  return res;
}

}  // namespace hawkes
