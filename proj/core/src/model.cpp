#include "hawkes/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

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

double exp_tail(double x, double mean) { return x <= 0.0 ? 1.0 : (std::isinf(x) ? 0.0 : std::exp(-x / mean)); }

}  // namespace

// ---------------------------------------------------------------------------

MarkDistribution empirical_marks(std::vector<double> samples) {
  if (samples.empty()) throw ConfigError("empirical mark distribution needs at least one sample");
  for (double x : samples)
    if (!std::isfinite(x)) throw ConfigError("empirical mark distribution: non-finite sample");
  return EmpiricalMarks{std::make_shared<const std::vector<double>>(std::move(samples))};
}

bool has_marks(const MarkDistribution& d) { return !std::holds_alternative<NoMarks>(d); }

double interval_probability(const MarkDistribution& d, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return std::visit(overloaded{
                        [](const NoMarks&) -> double { throw ConfigError("component has no mark distribution"); },
                        [lo, hi](const ExponentialMarks& e) { return exp_tail(lo, e.mean) - exp_tail(hi, e.mean); },
                        [lo, hi](const EmpiricalMarks& e) {
                          const auto& s = *e.samples;
                          const auto n = std::count_if(s.begin(), s.end(), [&](double x) { return x >= lo && x < hi; });
                          return static_cast<double>(n) / static_cast<double>(s.size());
                        },
                    },
                    d);
}

double conditional_mean(const MarkDistribution& d, double lo, double hi) {
  return std::visit(
      overloaded{
          [](const NoMarks&) -> double { throw ConfigError("component has no mark distribution"); },
          [lo, hi](const ExponentialMarks& e) {
            const double a = std::max(lo, 0.0);
            if (!(hi > a)) return std::numeric_limits<double>::quiet_NaN();
            if (std::isinf(hi)) return a + e.mean;
            const double ta = std::exp(-a / e.mean), tb = std::exp(-hi / e.mean);
            // E[xi 1{a<=xi<b}] = (a + mean) e^{-a/mean} - (b + mean) e^{-b/mean}
            return ((a + e.mean) * ta - (hi + e.mean) * tb) / (ta - tb);
          },
          [lo, hi](const EmpiricalMarks& e) {
            double sum = 0.0;
            std::size_t n = 0;
            for (double x : *e.samples) {
              if (x >= lo && x < hi) {
                sum += x;
                ++n;
              }
            }
            return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
          },
      },
      d);
}

// ---------------------------------------------------------------------------

std::size_t clamped_bin(const std::vector<double>& edges, double x) {
  const std::size_t bins = edges.size() - 1;
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  std::size_t k = static_cast<std::size_t>(it - edges.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, bins - 1);
}

MarkFunction MarkFunction::one() { return MarkFunction{}; }

MarkFunction MarkFunction::identity(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("identity mark function: scale must be > 0");
  MarkFunction f;
  f.kind_ = Kind::Identity;
  f.scale_ = scale;
  return f;
}

MarkFunction MarkFunction::piecewise(std::vector<double> edges, std::vector<double> levels) {
  if (edges.size() < 2) throw ConfigError("piecewise mark function needs at least two edges");
  if (levels.size() + 1 != edges.size())
    throw ConfigError("piecewise mark function: expected " + std::to_string(edges.size() - 1) + " levels, got " +
                      std::to_string(levels.size()));
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw ConfigError("piecewise mark function: edges must be strictly increasing");
  for (double v : levels)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("piecewise mark function: levels must be finite and >= 0");
  MarkFunction f;
  f.kind_ = Kind::PiecewiseConstant;
  f.edges_ = std::move(edges);
  f.levels_ = std::move(levels);
  return f;
}

double MarkFunction::operator()(double mark) const {
  switch (kind_) {
    case Kind::One:
      return scale_;
    case Kind::Identity:
      return scale_ * mark;
    case Kind::PiecewiseConstant:
      return scale_ * levels_[clamped_bin(edges_, mark)];
  }
  return scale_;
}

double MarkFunction::expectation(const MarkDistribution& d) const {
  switch (kind_) {
    case Kind::One:
      return scale_;
    case Kind::Identity:
      return std::visit(overloaded{
                            [](const NoMarks&) -> double {
                              throw ConfigError("identity mark function on an unmarked component");
                            },
                            [this](const ExponentialMarks& e) { return scale_ * e.mean; },
                            [this](const EmpiricalMarks& e) {
                              const auto& s = *e.samples;
                              return scale_ * std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
                            },
                        },
                        d);
    case Kind::PiecewiseConstant: {
      if (!has_marks(d)) throw ConfigError("piecewise mark function on an unmarked component");
      double acc = 0.0;
      const std::size_t m = levels_.size();
      for (std::size_t l = 0; l < m; ++l) {
        const double lo = l == 0 ? -kInf : edges_[l];
        const double hi = l + 1 == m ? kInf : edges_[l + 1];
        acc += levels_[l] * interval_probability(d, lo, hi);
      }
      return scale_ * acc;
    }
  }
  return scale_;
}

MarkFunction MarkFunction::scaled(double factor) const {
  MarkFunction f = *this;
  f.scale_ *= factor;
  return f;
}

// ---------------------------------------------------------------------------

HawkesModel::HawkesModel(Spec spec) : baseline_(std::move(spec.baseline)), rectified_(spec.rectified) {
  const int d = static_cast<int>(baseline_.size());
  if (d < 1) throw ConfigError("model dimension must be >= 1");
  const auto dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  if (spec.kernels.size() != dd)
    throw ConfigError("expected " + std::to_string(dd) + " kernels, got " + std::to_string(spec.kernels.size()));
  kernels_ = std::move(spec.kernels);

  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(baseline_(i))) throw ConfigError("baseline must be finite");
    if (baseline_(i) < 0.0 && !rectified_)
      throw ConfigError("baseline mu^" + std::to_string(i) + " < 0 requires a rectified model");
  }
  if (!rectified_) {
    for (std::size_t k = 0; k < dd; ++k)
      if (!kernels_[k].nonnegative())
        throw ConfigError("kernel phi^{" + std::to_string(k / static_cast<std::size_t>(d)) + "," +
                          std::to_string(k % static_cast<std::size_t>(d)) +
                          "} takes negative values; set rectified = true");
  }

  marks_ = spec.marks.empty() ? std::vector<MarkDistribution>(static_cast<std::size_t>(d), NoMarks{})
                              : std::move(spec.marks);
  if (marks_.size() != static_cast<std::size_t>(d)) throw ConfigError("one mark distribution per component expected");

  mark_functions_ = spec.mark_functions.empty() ? std::vector<MarkFunction>(dd) : std::move(spec.mark_functions);
  if (mark_functions_.size() != dd) throw ConfigError("expected D x D mark functions");

  normalization_.assign(dd, 1.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      auto& f = mark_functions_[index(i, j)];
      if (!has_marks(marks_[static_cast<std::size_t>(j)]) && f.kind() != MarkFunction::Kind::One)
        throw ConfigError("mark function on unmarked component " + std::to_string(j));
      const double e = f.expectation(marks_[static_cast<std::size_t>(j)]);
      if (!(e > 0.0) || !std::isfinite(e))
        throw ConfigError("mark function f^{" + std::to_string(i) + "," + std::to_string(j) +
                          "} has non-positive expectation");
      if (std::abs(e - 1.0) > 1e-12) {
        normalization_[index(i, j)] = 1.0 / e;
        f = f.scaled(1.0 / e);
      }
    }
  }
}

HawkesModel::Spec HawkesModel::spec() const {
  return Spec{baseline_, kernels_, marks_, mark_functions_, rectified_};
}

// ---------------------------------------------------------------------------

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ConfigError("spectral radius of a non-square matrix");
  if (!m.allFinite()) throw ConfigError("spectral radius: non-finite entries");
  if (m.size() == 0) return 0.0;

  // A^(2^n) = exp(log_scale) * b with ||b||_F = 1; rho = lim exp(log_scale / 2^n).
  const Eigen::VectorXd start = Eigen::VectorXd::Ones(m.rows());
  Eigen::MatrixXd b = m;
  double s = b.norm();
  if (s == 0.0) return 0.0;
  b /= s;
  double log_scale = std::log(s);
  double exponent = 1.0;
  double previous = std::exp(log_scale);
  int stable = 0;
  constexpr int kMaxSquarings = 200;
  for (int n = 0; n < kMaxSquarings; ++n) {
    b = (b * b).eval();
    s = b.norm();
    if (s == 0.0 || !std::isfinite(s)) return 0.0;  // nilpotent
    b /= s;
    log_scale = 2.0 * log_scale + std::log(s);
    exponent *= 2.0;
    // Growth along the deterministic start vector when it is not annihilated.
    const double along = (b * start).norm();
    const double est = along > 1e-300 ? std::exp((log_scale + std::log(along)) / exponent)
                                      : std::exp(log_scale / exponent);
    if (std::abs(est - previous) <= 1e-13 * std::max(1.0, est)) {
      if (++stable >= 2) return est;
    } else {
      stable = 0;
    }
    previous = est;
  }
  throw NumericalError("spectral radius: power iteration did not converge");
}

NormMatrix norm_matrix(const HawkesModel& model) {
  const int d = model.dim();
  NormMatrix out{Eigen::MatrixXd(d, d), 0.0};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.norms(i, j) = model.kernel(i, j).norm();
  out.spectral_radius = spectral_radius(out.norms);
  return out;
}

NormMatrix absolute_norm_matrix(const HawkesModel& model) {
  const int d = model.dim();
  NormMatrix out{Eigen::MatrixXd(d, d), 0.0};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.norms(i, j) = model.kernel(i, j).absolute_norm();
  out.spectral_radius = spectral_radius(out.norms);
  return out;
}

Eigen::VectorXd mean_rate(const HawkesModel& model) {
  const NormMatrix n = norm_matrix(model);
  if (n.spectral_radius >= 1.0) {
    std::ostringstream msg;
    msg << "unstable model: spectral radius of the norm matrix is " << n.spectral_radius << " >= 1";
    throw StabilityError(msg.str(), n.spectral_radius);
  }
  const int d = model.dim();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d) - n.norms;
  return a.partialPivLu().solve(model.baseline());
}

}  // namespace hawkes
