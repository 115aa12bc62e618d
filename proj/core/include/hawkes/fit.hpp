#pragma once

#include <cstddef>
#include <vector>

namespace hawkes {

/// phi(t) = amplitude * t^(-exponent), least squares in log-log coordinates
/// over the points with lo <= t <= hi and phi(t) > 0.
struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;  // beta, reported positive for decaying kernels
  double r2 = 0.0;
  std::size_t points = 0;
};
PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& phi, double lo, double hi);

/// phi(t) = C / (1 + t / c)^p. Profile fit: for each c on a logarithmic grid
/// the log-linear problem in (log C, p) is solved exactly; the c with the
/// smallest log residual wins.
struct EtasFit {
  double C = 0.0;
  double c = 0.0;
  double p = 0.0;
  double residual = 0.0;  // mean squared log residual
  std::size_t points = 0;
};
EtasFit fit_etas_kernel(const std::vector<double>& t, const std::vector<double>& phi, double lo, double hi);

/// f(m) = A e^(alpha m) over positive levels at the given mark values.
struct ProductivityFit {
  double A = 0.0;
  double alpha = 0.0;
  std::size_t points = 0;
};
ProductivityFit fit_productivity(const std::vector<double>& m, const std::vector<double>& f);

/// Prob(m > M) = 10^(a - b M) for M >= M0: b by the maximum-likelihood
/// (Aki) estimator, a = b M0 so that the law is normalized at M0.
/// `count_intercept` is log10 N(m >= M0) + b M0, the intercept of the
/// cumulative count curve log10 N(M).
struct GutenbergRichterFit {
  double a = 0.0;
  double b = 0.0;
  double count_intercept = 0.0;
  std::size_t events = 0;
};
GutenbergRichterFit fit_gutenberg_richter(const std::vector<double>& marks, double M0);

/// y = slope * x least squares.
double fit_slope_through_origin(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hawkes
