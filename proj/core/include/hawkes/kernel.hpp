#pragma once

#include <variant>
#include <vector>

namespace hawkes {

// phi(t) = amplitude * exp(-decay * t)
struct ExponentialKernel {
  double amplitude = 0.0;
  double decay = 1.0;  // 1/time
};

// phi(t) = amplitude * (offset + t)^(-exponent)
struct PowerLawKernel {
  double amplitude = 0.0;
  double offset = 1.0;  // time
  double exponent = 2.0;
};

struct Knot {
  double t = 0.0;
  double value = 0.0;
};

// Linear interpolation between knots, zero outside [first.t, last.t].
struct PiecewiseLinearKernel {
  std::vector<Knot> knots;
};

// Values on t = n * step, n = 0..size-1, linearly interpolated, zero past the last sample.
struct SampledKernel {
  double step = 1.0;
  std::vector<double> values;
};

struct ZeroKernel {};

using KernelShape =
    std::variant<ZeroKernel, ExponentialKernel, PowerLawKernel, PiecewiseLinearKernel, SampledKernel>;

/// A causal interaction kernel. Immutable after construction; evaluation at
/// negative times returns exactly zero.
class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(KernelShape shape);

  static Kernel exponential(double amplitude, double decay);
  static Kernel power_law(double amplitude, double offset, double exponent);
  static Kernel piecewise_linear(std::vector<Knot> knots);
  static Kernel sampled(double step, std::vector<double> values);

  double operator()(double t) const;

  /// Exact integral over [a, b] (b may be +infinity).
  double integral(double a, double b) const;

  /// Integral over [0, t].
  double cumulative(double t) const { return integral(0.0, t); }

  /// Integral over [0, infinity). Throws NormDivergenceError for non-integrable tails.
  double norm() const;

  /// Integral of |phi| over [0, infinity).
  double absolute_norm() const;

  /// End of the support; +infinity for exponential and power-law kernels.
  double support_end() const;

  /// Time beyond which the remaining mass is at most tail_fraction * |norm|.
  double effective_support(double tail_fraction) const;

  /// sup_{u >= tau} max(phi(u), 0). Used for dominating intensities.
  double remaining_max(double tau) const;

  /// Points inside the support where the kernel is not smooth (piecewise kernels only).
  std::vector<double> breakpoints() const;

  bool is_zero() const;
  bool nonnegative() const;
  bool is_piecewise_linear() const;

  const KernelShape& shape() const noexcept { return shape_; }

  /// Same shape with values multiplied by factor.
  Kernel scaled(double factor) const;

 private:
  void validate() const;
  void build_suffix_max();

  KernelShape shape_{ZeroKernel{}};
  // Running maximum of positive values from knot k to the end (piecewise shapes).
  std::vector<double> suffix_max_;
};

/// L1 norm of a kernel (its integral over the positive half-line).
double kernel_norm(const Kernel& k);

}  // namespace hawkes
