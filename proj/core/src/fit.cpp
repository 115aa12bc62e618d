#include "hawkes/fit.hpp"

#include <cmath>
#include <limits>

#include "hawkes/error.hpp"

namespace hawkes {
namespace {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  double mse = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit: abscissae are all equal");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - l.intercept - l.slope * x[k];
    rss += e * e;
  }
  l.mse = rss / n;
  l.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return l;
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& phi, double lo, double hi) {
  if (t.size() != phi.size()) throw ConfigError("fit: t and phi differ in length");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= lo && t[k] <= hi && t[k] > 0.0 && phi[k] > 0.0) {
      x.push_back(std::log(t[k]));
      y.push_back(std::log(phi[k]));
    }
  }
  if (x.size() < 2) throw ConfigError("power-law fit needs at least two positive points in range");
  const Line l = least_squares(x, y);
  return PowerLawFit{std::exp(l.intercept), -l.slope, l.r2, x.size()};
}

EtasFit fit_etas_kernel(const std::vector<double>& t, const std::vector<double>& phi, double lo, double hi) {
  if (t.size() != phi.size()) throw ConfigError("fit: t and phi differ in length");
  std::vector<double> tt, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= lo && t[k] <= hi && t[k] >= 0.0 && phi[k] > 0.0) {
      tt.push_back(t[k]);
      y.push_back(std::log(phi[k]));
    }
  }
  if (tt.size() < 3) throw ConfigError("ETAS fit needs at least three positive points in range");
  const double span = std::max(tt.back(), 1e-12);
  EtasFit best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= 400; ++g) {
    const double c = span * std::pow(10.0, -6.0 + 8.0 * g / 400.0);
    std::vector<double> x(tt.size());
    for (std::size_t k = 0; k < tt.size(); ++k) x[k] = std::log1p(tt[k] / c);
    const Line l = least_squares(x, y);
    if (l.mse < best.residual) {
      best = EtasFit{std::exp(l.intercept), c, -l.slope, l.mse, tt.size()};
    }
  }
  return best;
}

ProductivityFit fit_productivity(const std::vector<double>& m, const std::vector<double>& f) {
  if (m.size() != f.size()) throw ConfigError("fit: marks and levels differ in length");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (f[k] > 0.0 && std::isfinite(f[k])) {
      x.push_back(m[k]);
      y.push_back(std::log(f[k]));
    }
  }
  if (x.size() < 2) throw ConfigError("productivity fit needs at least two positive levels");
  const Line l = least_squares(x, y);
  return ProductivityFit{std::exp(l.intercept), l.slope, x.size()};
}

GutenbergRichterFit fit_gutenberg_richter(const std::vector<double>& marks, double M0) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double m : marks) {
    if (m >= M0) {
      sum += m - M0;
      ++n;
    }
  }
  if (n < 2 || !(sum > 0.0)) throw ConfigError("Gutenberg-Richter fit needs magnitudes above M0");
  GutenbergRichterFit r;
  r.events = n;
  r.b = std::log10(std::exp(1.0)) / (sum / static_cast<double>(n));
  r.a = r.b * M0;
  r.count_intercept = std::log10(static_cast<double>(n)) + r.b * M0;
  return r;
}

double fit_slope_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw ConfigError("fit: inconsistent inputs");
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += x[k] * y[k];
    sxx += x[k] * x[k];
  }
  if (!(sxx > 0.0)) throw ConfigError("fit: all abscissae are zero");
  return sxy / sxx;
}

}  // namespace hawkes
