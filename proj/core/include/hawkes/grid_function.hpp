#pragma once

#include <vector>

namespace hawkes {

/// Samples v_k at t = origin + k * step, read by linear interpolation (linear
/// extrapolation below the origin, constant beyond the last sample), with a
/// primitive P_k = integral over [0, k * step] stored on a grid anchored at 0.
class GridFunction {
 public:
  GridFunction() = default;

  /// The primitive integrates the interpolant exactly.
  GridFunction(double origin, double step, std::vector<double> values);

  /// Explicit primitive on t = k * step (e.g. an exact event-count primitive).
  GridFunction(double origin, double step, std::vector<double> values, std::vector<double> primitive);

  double operator()(double t) const;

  /// Integral over [0, t] for t >= 0, by linear interpolation of the primitive.
  double integral(double t) const;

  double origin() const noexcept { return origin_; }
  double step() const noexcept { return step_; }
  /// Last abscissa covered by both values and primitive.
  double end() const noexcept;
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& primitive() const noexcept { return primitive_; }

 private:
  double origin_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
  std::vector<double> primitive_;
};

}  // namespace hawkes
