#include "hawkes/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "hawkes/error.hpp"

namespace hawkes {
namespace {

double lerp_grid(const std::vector<double>& v, double x) {
  const double last = static_cast<double>(v.size() - 1);
  if (x >= last) return v.back();
  if (x <= 0.0) {
    if (v.size() < 2) return v.front();
    return v[0] + x * (v[1] - v[0]);
  }
  const auto k = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * v[k] + w * v[k + 1];
}

}  // namespace

GridFunction::GridFunction(double origin, double step, std::vector<double> values)
    : origin_(origin), step_(step), values_(std::move(values)) {
  if (!(step_ > 0.0)) throw ConfigError("grid function: step must be > 0");
  if (values_.empty()) throw ConfigError("grid function: no samples");
  // Exact integral of the interpolant over [0, k * step]; the interpolant is
  // linear on every [origin + m step, origin + (m+1) step] and extended linearly below origin.
  const double span_end = origin_ + static_cast<double>(values_.size() - 1) * step_;
  const auto points = static_cast<std::size_t>(std::floor(span_end / step_ + 1e-9)) + 1;
  primitive_.assign(points, 0.0);
  auto f = [this](double t) { return (*this)(t); };
  // Breakpoints of the interpolant between consecutive primitive grid points.
  for (std::size_t k = 1; k < points; ++k) {
    const double a = static_cast<double>(k - 1) * step_;
    const double b = static_cast<double>(k) * step_;
    double acc = 0.0;
    double left = a;
    const double first = std::ceil((a - origin_) / step_ + 1e-12);
    for (double m = first;; m += 1.0) {
      const double x = origin_ + m * step_;
      if (!(x < b - 1e-12 * step_)) break;
      if (x > left) {
        acc += 0.5 * (x - left) * (f(left) + f(x));
        left = x;
      }
    }
    acc += 0.5 * (b - left) * (f(left) + f(b));
    primitive_[k] = primitive_[k - 1] + acc;
  }
}

GridFunction::GridFunction(double origin, double step, std::vector<double> values, std::vector<double> primitive)
    : origin_(origin), step_(step), values_(std::move(values)), primitive_(std::move(primitive)) {
  if (!(step_ > 0.0)) throw ConfigError("grid function: step must be > 0");
  if (values_.empty() || primitive_.empty()) throw ConfigError("grid function: no samples");
}

double GridFunction::operator()(double t) const { return lerp_grid(values_, (t - origin_) / step_); }

double GridFunction::integral(double t) const {
  if (t <= 0.0) return 0.0;
  return lerp_grid(primitive_, t / step_);
}

double GridFunction::end() const noexcept {
  const double v = origin_ + static_cast<double>(values_.size() - 1) * step_;
  const double p = static_cast<double>(primitive_.size() - 1) * step_;
  return std::min(v, p);
}

}  // namespace hawkes
