#include "hawkes/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hawkes/error.hpp"

namespace hawkes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Uniform view over the two piecewise-linear shapes.
struct Polyline {
  const PiecewiseLinearKernel* pl = nullptr;
  const SampledKernel* sm = nullptr;

  std::size_t size() const { return pl ? pl->knots.size() : sm->values.size(); }
  double t(std::size_t k) const { return pl ? pl->knots[k].t : static_cast<double>(k) * sm->step; }
  double v(std::size_t k) const { return pl ? pl->knots[k].value : sm->values[k]; }

  // Index of the segment [t(k), t(k+1)] containing x, assuming t(0) <= x <= t(last).
  std::size_t segment(double x) const {
    if (sm) {
      const auto k = static_cast<std::size_t>(x / sm->step);
      return std::min(k, size() - 2);
    }
    auto it = std::upper_bound(pl->knots.begin(), pl->knots.end(), x,
                               [](double a, const Knot& kn) { return a < kn.t; });
    auto k = static_cast<std::size_t>(it - pl->knots.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, size() - 2);
  }

  double value(double x) const {
    const std::size_t n = size();
    if (n == 0 || x < t(0) || x > t(n - 1)) return 0.0;
    if (n == 1) return v(0);
    const std::size_t k = segment(x);
    const double t0 = t(k), t1 = t(k + 1);
    const double w = (x - t0) / (t1 - t0);
    return v(k) + w * (v(k + 1) - v(k));
  }

  // Exact integral of the polyline (or of its absolute value) over [a, b].
  double integral(double a, double b, bool absolute) const {
    const std::size_t n = size();
    if (n < 2) return 0.0;
    a = std::max(a, t(0));
    b = std::min(b, t(n - 1));
    if (!(b > a)) return 0.0;
    double acc = 0.0;
    for (std::size_t k = segment(a); k + 1 < n && t(k) < b; ++k) {
      const double lo = std::max(a, t(k));
      const double hi = std::min(b, t(k + 1));
      if (hi <= lo) continue;
      const double flo = value_on(k, lo);
      const double fhi = value_on(k, hi);
      acc += absolute ? abs_trapezoid(flo, fhi, hi - lo) : 0.5 * (flo + fhi) * (hi - lo);
    }
    return acc;
  }

  double value_on(std::size_t k, double x) const {
    const double t0 = t(k), t1 = t(k + 1);
    return v(k) + (x - t0) / (t1 - t0) * (v(k + 1) - v(k));
  }

  static double abs_trapezoid(double f0, double f1, double width) {
    if ((f0 >= 0 && f1 >= 0) || (f0 <= 0 && f1 <= 0)) return 0.5 * std::abs(f0 + f1) * width;
    const double cross = width * std::abs(f0) / (std::abs(f0) + std::abs(f1));
    return 0.5 * std::abs(f0) * cross + 0.5 * std::abs(f1) * (width - cross);
  }
};

Polyline polyline_of(const KernelShape& s) {
  Polyline p;
  if (auto* pl = std::get_if<PiecewiseLinearKernel>(&s)) p.pl = pl;
  if (auto* sm = std::get_if<SampledKernel>(&s)) p.sm = sm;
  return p;
}

double power_law_primitive(const PowerLawKernel& k, double a, double b) {
  // integral of amplitude * (offset + u)^(-exponent) over [a, b]
  const double e1 = 1.0 - k.exponent;
  if (std::abs(e1) < 1e-14) {
    if (std::isinf(b)) return k.amplitude == 0.0 ? 0.0 : std::copysign(kInf, k.amplitude);
    return k.amplitude * std::log((k.offset + b) / (k.offset + a));
  }
  const double upper = std::isinf(b) ? (e1 < 0 ? 0.0 : kInf) : std::pow(k.offset + b, e1);
  return k.amplitude * (upper - std::pow(k.offset + a, e1)) / e1;
}

}  // namespace

Kernel::Kernel(KernelShape shape) : shape_(std::move(shape)) {
  validate();
  build_suffix_max();
}

Kernel Kernel::exponential(double amplitude, double decay) {
  return Kernel(ExponentialKernel{amplitude, decay});
}

Kernel Kernel::power_law(double amplitude, double offset, double exponent) {
  return Kernel(PowerLawKernel{amplitude, offset, exponent});
}

Kernel Kernel::piecewise_linear(std::vector<Knot> knots) {
  return Kernel(PiecewiseLinearKernel{std::move(knots)});
}

Kernel Kernel::sampled(double step, std::vector<double> values) {
  return Kernel(SampledKernel{step, std::move(values)});
}

void Kernel::validate() const {
  std::visit(overloaded{
                 [](const ZeroKernel&) {},
                 [](const ExponentialKernel& k) {
                   if (!(k.decay > 0.0) || !std::isfinite(k.decay))
                     throw ConfigError("exponential kernel: decay rate must be > 0");
                   if (!std::isfinite(k.amplitude))
                     throw ConfigError("exponential kernel: amplitude must be finite");
                 },
                 [](const PowerLawKernel& k) {
                   if (!(k.offset > 0.0) || !std::isfinite(k.offset))
                     throw ConfigError("power-law kernel: offset must be > 0");
                   if (!std::isfinite(k.amplitude) || !std::isfinite(k.exponent))
                     throw ConfigError("power-law kernel: parameters must be finite");
                 },
                 [](const PiecewiseLinearKernel& k) {
                   if (k.knots.empty()) throw ConfigError("piecewise-linear kernel: no knots");
                   for (std::size_t n = 0; n < k.knots.size(); ++n) {
                     const auto& kn = k.knots[n];
                     if (!std::isfinite(kn.t) || !std::isfinite(kn.value))
                       throw ConfigError("piecewise-linear kernel: non-finite knot");
                     if (kn.t < 0.0) throw ConfigError("piecewise-linear kernel: knot at negative time");
                     if (n > 0 && !(kn.t > k.knots[n - 1].t))
                       throw ConfigError("piecewise-linear kernel: knot times must be strictly increasing");
                   }
                 },
                 [](const SampledKernel& k) {
                   if (!(k.step > 0.0) || !std::isfinite(k.step))
                     throw ConfigError("sampled kernel: step must be > 0");
                   if (k.values.empty()) throw ConfigError("sampled kernel: no values");
                   for (double v : k.values)
                     if (!std::isfinite(v)) throw ConfigError("sampled kernel: non-finite value");
                 },
             },
             shape_);
}

void Kernel::build_suffix_max() {
  const Polyline p = polyline_of(shape_);
  if (!p.pl && !p.sm) return;
  const std::size_t n = p.size();
  suffix_max_.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    running = std::max(running, p.v(k));
    suffix_max_[k] = running;
  }
}

double Kernel::operator()(double t) const {
  if (t < 0.0) return 0.0;
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return 0.0; },
                        [t](const ExponentialKernel& k) { return k.amplitude * std::exp(-k.decay * t); },
                        [t](const PowerLawKernel& k) {
                          return k.amplitude * std::pow(k.offset + t, -k.exponent);
                        },
                        [this, t](const auto&) { return polyline_of(shape_).value(t); },
                    },
                    shape_);
}

double Kernel::integral(double a, double b) const {
  a = std::max(a, 0.0);
  if (!(b > a)) return 0.0;
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return 0.0; },
                        [a, b](const ExponentialKernel& k) {
                          // amplitude/decay * (e^{-decay a} - e^{-decay b})
                          const double head = std::exp(-k.decay * a);
                          if (std::isinf(b)) return k.amplitude * head / k.decay;
                          return -k.amplitude * head * std::expm1(-k.decay * (b - a)) / k.decay;
                        },
                        [a, b](const PowerLawKernel& k) { return power_law_primitive(k, a, b); },
                        [this, a, b](const auto&) { return polyline_of(shape_).integral(a, b, false); },
                    },
                    shape_);
}

double Kernel::norm() const {
  if (const auto* pw = std::get_if<PowerLawKernel>(&shape_)) {
    if (pw->exponent <= 1.0 && pw->amplitude != 0.0)
      throw NormDivergenceError("power-law kernel with exponent " + std::to_string(pw->exponent) +
                                " <= 1 has an infinite L1 norm");
  }
  return integral(0.0, kInf);
}

double Kernel::absolute_norm() const {
  const Polyline p = polyline_of(shape_);
  if (p.pl || p.sm) return p.integral(0.0, kInf, true);
  return std::abs(norm());
}

double Kernel::support_end() const {
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return 0.0; },
                        [](const ExponentialKernel& k) { return k.amplitude == 0.0 ? 0.0 : kInf; },
                        [](const PowerLawKernel& k) { return k.amplitude == 0.0 ? 0.0 : kInf; },
                        [this](const auto&) {
                          const Polyline p = polyline_of(shape_);
                          return p.t(p.size() - 1);
                        },
                    },
                    shape_);
}

double Kernel::effective_support(double tail_fraction) const {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
    throw ConfigError("tail fraction must lie in (0, 1)");
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return 0.0; },
                        [tail_fraction](const ExponentialKernel& k) {
                          return k.amplitude == 0.0 ? 0.0 : std::log(1.0 / tail_fraction) / k.decay;
                        },
                        [this, tail_fraction](const PowerLawKernel& k) {
                          if (k.amplitude == 0.0) return 0.0;
                          (void)norm();  // throws for divergent tails
                          // tail mass fraction = (offset / (offset + t))^(exponent - 1)
                          return k.offset * (std::pow(tail_fraction, -1.0 / (k.exponent - 1.0)) - 1.0);
                        },
                        [this](const auto&) { return support_end(); },
                    },
                    shape_);
}

double Kernel::remaining_max(double tau) const {
  tau = std::max(tau, 0.0);
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return 0.0; },
                        [tau](const ExponentialKernel& k) {
                          return k.amplitude > 0.0 ? k.amplitude * std::exp(-k.decay * tau) : 0.0;
                        },
                        [tau](const PowerLawKernel& k) {
                          return k.amplitude > 0.0 ? k.amplitude * std::pow(k.offset + tau, -k.exponent) : 0.0;
                        },
                        [this, tau](const auto&) {
                          const Polyline p = polyline_of(shape_);
                          const std::size_t n = p.size();
                          if (tau > p.t(n - 1)) return 0.0;
                          double best = std::max(0.0, p.value(tau));
                          // first knot with t >= tau
                          std::size_t k = 0;
                          if (p.sm) {
                            k = static_cast<std::size_t>(std::ceil(tau / p.sm->step));
                          } else {
                            auto it = std::lower_bound(p.pl->knots.begin(), p.pl->knots.end(), tau,
                                                       [](const Knot& kn, double x) { return kn.t < x; });
                            k = static_cast<std::size_t>(it - p.pl->knots.begin());
                          }
                          if (k < n) best = std::max(best, suffix_max_[k]);
                          return best;
                        },
                    },
                    shape_);
}

std::vector<double> Kernel::breakpoints() const {
  const Polyline p = polyline_of(shape_);
  std::vector<double> out;
  if (!p.pl && !p.sm) return out;
  out.reserve(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out.push_back(p.t(k));
  return out;
}

bool Kernel::is_zero() const {
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return true; },
                        [](const ExponentialKernel& k) { return k.amplitude == 0.0; },
                        [](const PowerLawKernel& k) { return k.amplitude == 0.0; },
                        [this](const auto&) {
                          const Polyline p = polyline_of(shape_);
                          for (std::size_t k = 0; k < p.size(); ++k)
                            if (p.v(k) != 0.0) return false;
                          return true;
                        },
                    },
                    shape_);
}

bool Kernel::nonnegative() const {
  return std::visit(overloaded{
                        [](const ZeroKernel&) { return true; },
                        [](const ExponentialKernel& k) { return k.amplitude >= 0.0; },
                        [](const PowerLawKernel& k) { return k.amplitude >= 0.0; },
                        [this](const auto&) {
                          const Polyline p = polyline_of(shape_);
                          for (std::size_t k = 0; k < p.size(); ++k)
                            if (p.v(k) < 0.0) return false;
                          return true;
                        },
                    },
                    shape_);
}

bool Kernel::is_piecewise_linear() const {
  return std::holds_alternative<ZeroKernel>(shape_) ||
         std::holds_alternative<PiecewiseLinearKernel>(shape_) ||
         std::holds_alternative<SampledKernel>(shape_);
}

Kernel Kernel::scaled(double factor) const {
  KernelShape s = shape_;
  std::visit(overloaded{
                 [](ZeroKernel&) {},
                 [factor](ExponentialKernel& k) { k.amplitude *= factor; },
                 [factor](PowerLawKernel& k) { k.amplitude *= factor; },
                 [factor](PiecewiseLinearKernel& k) {
                   for (auto& kn : k.knots) kn.value *= factor;
                 },
                 [factor](SampledKernel& k) {
                   for (auto& v : k.values) v *= factor;
                 },
             },
             s);
  return Kernel(std::move(s));
}

double kernel_norm(const Kernel& k) { return k.norm(); }

}  // namespace hawkes
