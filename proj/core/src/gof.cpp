#include "hawkes/gof.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <variant>

#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/format.hpp"

namespace hawkes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tagged {
  double t;
  int component;
  std::size_t index;
};

std::vector<Tagged> merged_events(const EventSeries& s) {
  std::vector<Tagged> all;
  all.reserve(s.total_size());
  for (int k = 0; k < s.dim(); ++k)
    for (std::size_t n = 0; n < s.size(k); ++n) all.push_back({s.times(k)[n], k, n});
  std::stable_sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
    return a.t < b.t || (a.t == b.t && a.component < b.component);
  });
  return all;
}

// Contribution of one source component k to the intensity of a target j.
struct Source {
  enum class Type { None, Exponential, Window } type = Type::None;
  const Kernel* kernel = nullptr;
  double alpha = 0.0;
  double decay = 0.0;
  double S = 0.0;       // sum of w exp(-decay (t - s)) at time `last`
  double F = 0.0;       // sum of w
  double last = 0.0;
  double W = kInf;      // window length (support or tail cut)
  double cum_W = 0.0;   // integral of the kernel over [0, W]
  double retired = 0.0; // sum of w * cum_W over events that left the window
  std::deque<std::pair<double, double>> window;  // (time, weight)
  std::vector<double> knots;                     // breakpoints inside [0, W]
  bool linear = true;   // kernel piecewise linear between knots

  void advance(double t) {
    if (type == Type::Exponential) {
      S *= std::exp(-decay * (t - last));
      last = t;
    } else if (type == Type::Window) {
      while (!window.empty() && t - window.front().first >= W) {
        retired += window.front().second * cum_W;
        window.pop_front();
      }
    }
  }
  void add(double s, double w) {
    if (type == Type::Exponential) {
      S += w;
      F += w;
    } else if (type == Type::Window) {
      window.emplace_back(s, w);
    }
  }
  double value(double u) const {
    if (!(u >= 0.0) || u >= W) return 0.0;
    return (*kernel)(u);
  }
  // Intensity contribution at u >= last event time (state as of `last` for exponentials).
  double lambda(double u) const {
    if (type == Type::Exponential) return alpha * S * std::exp(-decay * (u - last));
    double acc = 0.0;
    if (type == Type::Window)
      for (const auto& [s, w] : window) acc += w * value(u - s);
    return acc;
  }
  double compensator(double t) const {
    if (type == Type::Exponential) return alpha / decay * (F - S);
    double acc = retired;
    if (type == Type::Window)
      for (const auto& [s, w] : window) acc += w * kernel->integral(0.0, std::min(t - s, W));
    return acc;
  }
};

std::vector<Source> make_sources(const HawkesModel& m, int j, double tail_fraction) {
  std::vector<Source> src(static_cast<std::size_t>(m.dim()));
  for (int k = 0; k < m.dim(); ++k) {
    Source& sc = src[static_cast<std::size_t>(k)];
    const Kernel& ker = m.kernel(j, k);
    sc.kernel = &ker;
    if (ker.is_zero()) continue;
    if (const auto* e = std::get_if<ExponentialKernel>(&ker.shape())) {
      sc.type = Source::Type::Exponential;
      sc.alpha = e->amplitude;
      sc.decay = e->decay;
      sc.linear = false;
      continue;
    }
    sc.type = Source::Type::Window;
    sc.W = ker.support_end();
    if (!std::isfinite(sc.W)) sc.W = ker.effective_support(tail_fraction);
    sc.cum_W = ker.integral(0.0, sc.W);
    sc.linear = ker.is_piecewise_linear();
    sc.knots = ker.breakpoints();
    sc.knots.push_back(sc.W);
    if (const auto* smp = std::get_if<SampledKernel>(&ker.shape())) {
      sc.knots.clear();
      for (std::size_t n = 0; n < smp->values.size(); ++n) sc.knots.push_back(static_cast<double>(n) * smp->step);
      sc.knots.push_back(sc.W);
    }
    std::sort(sc.knots.begin(), sc.knots.end());
  }
  return src;
}

double weight(const HawkesModel& m, const EventSeries& s, int j, int k, std::size_t n) {
  const MarkFunction& f = m.mark_function(j, k);
  if (f.kind() == MarkFunction::Kind::One || !s.marked(k)) return 1.0;
  return f(s.marks(k)[n]);
}

bool needs_clamp(const HawkesModel& m) {
  if (m.rectified()) return true;
  for (int i = 0; i < m.dim(); ++i) {
    if (m.baseline()(i) < 0.0) return true;
    for (int k = 0; k < m.dim(); ++k)
      if (!m.kernel(i, k).nonnegative()) return true;
  }
  return false;
}

// Integral of max(l, 0) for l linear from la to lb over a width w.
double positive_linear(double la, double lb, double w) {
  if (la >= 0.0 && lb >= 0.0) return 0.5 * w * (la + lb);
  if (la <= 0.0 && lb <= 0.0) return 0.0;
  const double p = std::max(la, lb), n = -std::min(la, lb);
  return 0.5 * w * p * p / (p + n);
}

// Eight-point Gauss-Legendre on [-1, 1].
constexpr double kGLx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGLw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct TargetSweep {
  std::vector<double> lambda;  // lambda(t-) at events of j
  std::vector<double> comp;    // compensator at events of j
};

TargetSweep sweep_target(const HawkesModel& m, const EventSeries& s, const std::vector<Tagged>& all, int j,
                         const GofConfig& c, bool clamp) {
  std::vector<Source> src = make_sources(m, j, c.tail_fraction);
  const double mu = m.baseline()(j);
  bool all_linear = true;
  for (const auto& sc : src)
    if (sc.type != Source::Type::None && !sc.linear) all_linear = false;

  auto lambda_at = [&](double u) {
    double l = mu;
    for (const auto& sc : src) l += sc.lambda(u);
    return l;
  };

  TargetSweep out;
  out.lambda.reserve(s.size(j));
  out.comp.reserve(s.size(j));
  double running = 0.0;  // clamped compensator accumulated up to `prev`
  double prev = 0.0;
  std::vector<double> cuts;

  auto integrate_clamped = [&](double a, double b) {
    if (!(b > a)) return;
    cuts.assign({a, b});
    for (const auto& sc : src) {
      if (sc.type != Source::Type::Window) continue;
      for (const auto& [sv, w] : sc.window) {
        (void)w;
        auto lo = std::upper_bound(sc.knots.begin(), sc.knots.end(), a - sv);
        for (auto it = lo; it != sc.knots.end() && sv + *it < b; ++it) cuts.push_back(sv + *it);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
      const double x0 = cuts[q], x1 = cuts[q + 1];
      if (!(x1 > x0)) continue;
      if (all_linear) {
        // Right limit at x0 and left limit at x1 of a linear piece.
        const double eps = 1e-12 * std::max(1.0, std::abs(x1));
        const double w = x1 - x0;
        const double la = lambda_at(std::min(x0 + eps, 0.5 * (x0 + x1)));
        const double lb = lambda_at(std::max(x1 - eps, 0.5 * (x0 + x1)));
        running += positive_linear(la, lb, w);
      } else {
        const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
        double acc = 0.0;
        for (int g = 0; g < 8; ++g) acc += kGLw[g] * std::max(0.0, lambda_at(mid + half * kGLx[g]));
        running += half * acc;
      }
    }
  };

  std::size_t p = 0;
  while (p < all.size()) {
    const double t = all[p].t;
    std::size_t q = p;
    while (q < all.size() && all[q].t == t) ++q;
    for (auto& sc : src) sc.advance(clamp ? prev : t);
    if (clamp) {
      integrate_clamped(prev, t);
      for (auto& sc : src) sc.advance(t);
    }
    for (std::size_t r = p; r < q; ++r) {
      if (all[r].component != j) continue;
      double l = lambda_at(t);
      if (clamp) l = std::max(l, 0.0);
      out.lambda.push_back(l);
      if (clamp) {
        out.comp.push_back(running);
      } else {
        double C = mu * t;
        for (const auto& sc : src) C += sc.compensator(t);
        out.comp.push_back(C);
      }
    }
    for (std::size_t r = p; r < q; ++r) {
      const int k = all[r].component;
      src[static_cast<std::size_t>(k)].add(t, weight(m, s, j, k, all[r].index));
    }
    prev = t;
    p = q;
  }
  return out;
}

void check_model(const HawkesModel& m, const EventSeries& s) {
  if (m.dim() != s.dim()) throw ConfigError("model and event series have different dimensions");
}

}  // namespace

std::vector<std::vector<double>> reconstruct_intensity(const HawkesModel& m, const EventSeries& s,
                                                       const GofConfig& c) {
  check_model(m, s);
  const bool clamp = needs_clamp(m);
  const auto all = merged_events(s);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.dim()));
  for (int j = 0; j < m.dim(); ++j) out[static_cast<std::size_t>(j)] = sweep_target(m, s, all, j, c, clamp).lambda;
  return out;
}

double intensity(const HawkesModel& m, const EventSeries& s, int j, double t, const GofConfig& c) {
  check_model(m, s);
  if (j < 0 || j >= m.dim()) throw ConfigError("component index out of range");
  double l = m.baseline()(j);
  for (int k = 0; k < m.dim(); ++k) {
    const Kernel& ker = m.kernel(j, k);
    if (ker.is_zero()) continue;
    double W = ker.support_end();
    if (!std::isfinite(W) && !std::holds_alternative<ExponentialKernel>(ker.shape()))
      W = ker.effective_support(c.tail_fraction);
    const auto& tk = s.times(k);
    const auto end = std::lower_bound(tk.begin(), tk.end(), t);
    for (auto it = end; it != tk.begin();) {
      --it;
      const double u = t - *it;
      if (u >= W) break;
      l += weight(m, s, j, k, static_cast<std::size_t>(it - tk.begin())) * ker(u);
    }
  }
  return needs_clamp(m) ? std::max(l, 0.0) : l;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_exponential(std::vector<double> x) {
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double F = -std::expm1(-std::max(x[k], 0.0));
    d = std::max({d, static_cast<double>(k + 1) / n - F, F - static_cast<double>(k) / n});
  }
  return d;
}

ComponentResiduals summarize_residuals(std::vector<double> tau, const GofConfig& c) {
  if (c.last > 0 && tau.size() > c.last) tau.erase(tau.begin(), tau.end() - static_cast<std::ptrdiff_t>(c.last));
  ComponentResiduals r;
  for (std::size_t k = 0; k < tau.size(); ++k)
    if (tau[k] <= 0.0) r.zero.push_back(k);
  r.tau = std::move(tau);
  if (!r.tau.empty()) r.mean = std::accumulate(r.tau.begin(), r.tau.end(), 0.0) / static_cast<double>(r.tau.size());
  std::vector<double> sorted = r.tau;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty()) {
    const std::size_t L = c.qq_levels;
    for (std::size_t k = 1; k <= L; ++k) {
      const double prob = static_cast<double>(k) / static_cast<double>(L + 1);
      const double pos = prob * static_cast<double>(sorted.size() - 1);
      const auto lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
      const double emp = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
      const double theo = -std::log1p(-prob);
      r.qq.emplace_back(theo, emp);
      r.max_qq_deviation = std::max(r.max_qq_deviation, std::abs(emp - theo));
    }
  }
  if (r.tau.size() >= c.min_events) {
    r.tested = true;
    r.ks_statistic = ks_exponential(r.tau);
    r.p_value = kolmogorov_survival(std::sqrt(static_cast<double>(r.tau.size())) * r.ks_statistic);
  } else {
    r.p_value = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

ResidualSet rescale(const HawkesModel& m, const EventSeries& s, const GofConfig& c) {
  check_model(m, s);
  bool clamp = needs_clamp(m);
  if (!m.rectified()) {
    const NormMatrix nm = norm_matrix(m);
    if (nm.spectral_radius >= 1.0) {
      std::ostringstream msg;
      msg << "model is unstable (spectral radius " << nm.spectral_radius << "); intensities are clamped at 0";
      warn(msg.str());
      clamp = true;
    }
  }
  const auto all = merged_events(s);
  ResidualSet out;
  for (int j = 0; j < m.dim(); ++j) {
    const TargetSweep ts = sweep_target(m, s, all, j, c, clamp);
    std::vector<double> tau;
    for (std::size_t k = 1; k < ts.comp.size(); ++k) tau.push_back(std::max(0.0, ts.comp[k] - ts.comp[k - 1]));
    ComponentResiduals r = summarize_residuals(std::move(tau), c);
    if (!r.tested) {
      std::ostringstream msg;
      msg << "component " << j << ": " << r.tau.size() << " residuals, fewer than " << c.min_events
          << "; KS test skipped";
      warn(msg.str());
    }
    if (!r.zero.empty()) {
      std::ostringstream msg;
      msg << "component " << j << ": " << r.zero.size() << " rescaled times are 0 (intensity vanished)";
      warn(msg.str());
    }
    out.components.push_back(std::move(r));
  }
  return out;
}

void write_qq_csv(const std::string& path, const ComponentResiduals& r) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "exponential,empirical\n";
  for (const auto& [x, y] : r.qq) out << format_double(x) << ',' << format_double(y) << '\n';
}

std::string gof_report(const ResidualSet& r) {
  std::ostringstream o;
  for (std::size_t j = 0; j < r.components.size(); ++j) {
    const auto& c = r.components[j];
    o << "component " << j << ": n=" << c.tau.size() << " mean=" << format_double(c.mean);
    if (c.tested)
      o << " ks=" << format_double(c.ks_statistic) << " p=" << format_double(c.p_value);
    else
      o << " ks=untested";
    o << " max_qq_dev=" << format_double(c.max_qq_deviation) << " zero=" << c.zero.size() << '\n';
  }
  return o.str();
}

}  // namespace hawkes
