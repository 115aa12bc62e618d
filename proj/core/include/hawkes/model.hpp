#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/kernel.hpp"

namespace hawkes {

// ---------------------------------------------------------------------------
// Mark distributions

struct NoMarks {};

struct ExponentialMarks {
  double mean = 1.0;
};

/// Resamples uniformly from a fixed set of observed marks (e.g. magnitudes).
struct EmpiricalMarks {
  std::shared_ptr<const std::vector<double>> samples;
};

using MarkDistribution = std::variant<NoMarks, ExponentialMarks, EmpiricalMarks>;

MarkDistribution empirical_marks(std::vector<double> samples);

bool has_marks(const MarkDistribution& d);

/// P(lo <= xi < hi) under d (lo may be -inf, hi may be +inf).
double interval_probability(const MarkDistribution& d, double lo, double hi);

/// E[xi | lo <= xi < hi]; NaN when the interval has zero probability.
double conditional_mean(const MarkDistribution& d, double lo, double hi);

// ---------------------------------------------------------------------------
// Mark functions

/// f^{ij}: how the mark of a source event scales its kernel.
class MarkFunction {
 public:
  enum class Kind { One, Identity, PiecewiseConstant };

  MarkFunction() = default;

  static MarkFunction one();
  static MarkFunction identity(double scale = 1.0);
  /// Bins [edges[l], edges[l+1]); values below the first edge or above the
  /// last are clamped into the end bins.
  static MarkFunction piecewise(std::vector<double> edges, std::vector<double> levels);

  double operator()(double mark) const;

  /// E[f(xi)] under d. Throws ConfigError when it cannot be computed.
  double expectation(const MarkDistribution& d) const;

  MarkFunction scaled(double factor) const;

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<double>& levels() const noexcept { return levels_; }

 private:
  Kind kind_ = Kind::One;
  double scale_ = 1.0;
  std::vector<double> edges_;
  std::vector<double> levels_;
};

/// Index of the bin containing x for edges e_0 < ... < e_M, clamped to [0, M-1].
std::size_t clamped_bin(const std::vector<double>& edges, double x);

// ---------------------------------------------------------------------------
// Model

/// Multivariate (optionally marked, optionally rectified) Hawkes model.
/// Immutable once constructed.
class HawkesModel {
 public:
  struct Spec {
    Eigen::VectorXd baseline;
    std::vector<Kernel> kernels;                  // row-major D x D, kernels[i*D+j] = phi^{ij}
    std::vector<MarkDistribution> marks;          // per source component; empty = unmarked
    std::vector<MarkFunction> mark_functions;     // row-major D x D; empty = all One
    bool rectified = false;
  };

  explicit HawkesModel(Spec spec);

  int dim() const noexcept { return static_cast<int>(baseline_.size()); }
  const Eigen::VectorXd& baseline() const noexcept { return baseline_; }
  const Kernel& kernel(int i, int j) const { return kernels_[index(i, j)]; }
  const MarkDistribution& mark_distribution(int j) const { return marks_[static_cast<std::size_t>(j)]; }
  const MarkFunction& mark_function(int i, int j) const { return mark_functions_[index(i, j)]; }
  bool marked(int j) const { return has_marks(mark_distribution(j)); }
  bool rectified() const noexcept { return rectified_; }

  /// Factor applied to f^{ij} so that E[f^{ij}(xi^j)] = 1.
  double normalization_factor(int i, int j) const { return normalization_[index(i, j)]; }

  /// Spec with the normalized mark functions; rebuilding from it is a no-op.
  Spec spec() const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(j);
  }

  Eigen::VectorXd baseline_;
  std::vector<Kernel> kernels_;
  std::vector<MarkDistribution> marks_;
  std::vector<MarkFunction> mark_functions_;
  std::vector<double> normalization_;
  bool rectified_ = false;
};

struct NormMatrix {
  Eigen::MatrixXd norms;  // ||phi^{ij}||
  double spectral_radius = 0.0;
};

/// Largest eigenvalue modulus. Power iteration on repeated squares of the
/// matrix (A, A^2, A^4, ...) from the all-ones start vector; converges for
/// defective and rotation-type spectra as well. Tolerance 1e-10.
double spectral_radius(const Eigen::MatrixXd& m);

/// Norms of the kernels (signed integrals) and their spectral radius.
NormMatrix norm_matrix(const HawkesModel& model);

/// Same with |phi| integrated, the relevant stability measure for rectified models.
NormMatrix absolute_norm_matrix(const HawkesModel& model);

/// Stationary mean rates (I - ||Phi||)^{-1} mu. Throws StabilityError when rho >= 1.
Eigen::VectorXd mean_rate(const HawkesModel& model);

}  // namespace hawkes
