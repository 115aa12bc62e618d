#include "hawkes/condlaw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hawkes/error.hpp"
#include "hawkes/format.hpp"

namespace hawkes {

SmoothingKernel::SmoothingKernel(int order) : order_(order) {
  if (order < 0 || order > 2) throw ConfigError("smoothing kernel order must be 0, 1 or 2");
}

double SmoothingKernel::operator()(double u) const {
  if (u < 0.0 || u >= 1.0) return 0.0;
  switch (order_) {
    case 1:
      return 4.0 - 6.0 * u;
    case 2:
      return 9.0 - 36.0 * u + 30.0 * u * u;
    default:
      return 1.0;
  }
}

std::vector<double> SmoothingKernel::coefficients() const {
  switch (order_) {
    case 1:
      return {4.0, -6.0};
    case 2:
      return {9.0, -36.0, 30.0};
    default:
      return {1.0};
  }
}

double SmoothingKernel::l2_norm_squared() const noexcept {
  const double k = static_cast<double>(order_ + 1);
  return k * k;
}

double CondLawEstimate::value_at(double t) const {
  if (values.empty()) return 0.0;
  const double x = std::clamp(t / step, 0.0, static_cast<double>(values.size() - 1));
  const auto k = std::min(static_cast<std::size_t>(x), values.size() - 1);
  if (k + 1 >= values.size()) return values.back();
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

std::vector<double> trapezoid_primitive(const std::vector<double>& values, double step) {
  std::vector<double> p(values.size(), 0.0);
  for (std::size_t k = 1; k < values.size(); ++k) p[k] = p[k - 1] + 0.5 * step * (values[k - 1] + values[k]);
  return p;
}

PairLags collect_lags(const EventSeries& s, int i, int j, double max_lag, double last_conditioning) {
  PairLags out;
  const auto& ti = s.times(i);
  const auto& tj = s.times(j);
  std::size_t lo = 0;
  for (std::size_t n = 0; n < tj.size(); ++n) {
    const double t0 = tj[n];
    if (t0 > last_conditioning) break;
    ++out.conditioning;
    while (lo < ti.size() && ti[lo] < t0) ++lo;
    for (std::size_t m = lo; m < ti.size(); ++m) {
      const double lag = ti[m] - t0;
      if (lag >= max_lag) break;
      if (i == j && m == n) continue;
      out.lags.push_back(lag);
      out.source.push_back(static_cast<std::uint32_t>(n));
    }
  }
  return out;
}

namespace {

struct Accumulated {
  std::vector<double> sum;
  std::vector<double> cells;  // lags with ceil(lag / step) == k
  std::size_t conditioning = 0;
};

void accumulate(Accumulated& a, double lag, double h, double step, std::size_t n, const SmoothingKernel& K) {
  const auto k_hi = static_cast<long long>(std::floor(lag / step));
  const auto k_lo = static_cast<long long>(std::floor((lag - h) / step));
  for (long long k = std::max(0LL, k_lo); k <= std::min<long long>(static_cast<long long>(n), k_hi); ++k) {
    const double u = (lag - static_cast<double>(k) * step) / h;
    if (u < 0.0 || u >= 1.0) continue;
    a.sum[static_cast<std::size_t>(k)] += K(u);
  }
  const auto c = static_cast<long long>(std::ceil(lag / step));
  if (c <= static_cast<long long>(n)) a.cells[static_cast<std::size_t>(c)] += 1.0;
}

CondLawEstimate finish(const Accumulated& a, int i, int j, int bin, const CondLawConfig& c, double rate_i,
                       double rate_j) {
  CondLawEstimate e;
  e.i = i;
  e.j = j;
  e.bin = bin;
  e.h = c.h;
  e.step = c.grid_step();
  e.kernel_first_moment = c.kernel.first_moment();
  e.rate_i = rate_i;
  e.rate_j = rate_j;
  e.conditioning = a.conditioning;
  e.degenerate = a.conditioning == 0;
  const std::size_t n = a.sum.size();
  e.values.assign(n, 0.0);
  e.count_primitive.assign(n, 0.0);
  const double J = static_cast<double>(a.conditioning);
  double cum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += a.cells[k];
    if (J > 0) {
      e.values[k] = a.sum[k] / (J * c.h) - rate_i;
      e.count_primitive[k] = cum / J - rate_i * e.t(k);
    } else {
      e.values[k] = -rate_i;
      e.count_primitive[k] = -rate_i * e.t(k);
    }
  }
  e.primitive = trapezoid_primitive(e.values, e.step);
  return e;
}

std::size_t grid_points(const CondLawConfig& c) {
  const double step = c.grid_step();
  return static_cast<std::size_t>(std::ceil(c.t_max / step - 1e-9)) + 1;
}

void check_config(const EventSeries& s, int i, int j, const CondLawConfig& c) {
  if (i < 0 || j < 0 || i >= s.dim() || j >= s.dim()) throw ConfigError("component index out of range");
  if (!(c.h > 0.0) || !std::isfinite(c.h)) throw ConfigError("bandwidth h must be > 0");
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw ConfigError("t_max must be > 0");
  if (!(c.grid_step() > 0.0)) throw ConfigError("grid step must be > 0");
  const double reach = static_cast<double>(grid_points(c) - 1) * c.grid_step() + c.h;
  if (reach > s.horizon())
    throw ConfigError("t_max + h = " + format_double(reach) + " exceeds the observation window " +
                      format_double(s.horizon()));
}

}  // namespace

CondLawEstimate estimate_g(const EventSeries& s, int i, int j, const CondLawConfig& c) {
  check_config(s, i, j, c);
  const std::size_t n = grid_points(c);
  const double step = c.grid_step();
  const double reach = static_cast<double>(n - 1) * step + c.h;
  const PairLags lags = collect_lags(s, i, j, reach, s.horizon() - reach);
  Accumulated a{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), lags.conditioning};
  for (double lag : lags.lags) accumulate(a, lag, c.h, step, n - 1, c.kernel);
  const double rate_i = static_cast<double>(s.size(i)) / s.horizon();
  const double rate_j = static_cast<double>(s.size(j)) / s.horizon();
  return finish(a, i, j, -1, c, rate_i, rate_j);
}

std::vector<CondLawEstimate> estimate_G_marked(const EventSeries& s, int i, int j, const MarkBins& bins,
                                               const CondLawConfig& c) {
  check_config(s, i, j, c);
  if (bins.size() == 0) throw ConfigError("no mark bins");
  const std::size_t n = grid_points(c);
  const double step = c.grid_step();
  const double reach = static_cast<double>(n - 1) * step + c.h;
  const std::size_t M = bins.size();

  std::vector<std::size_t> bin_of(s.size(j), 0);
  if (M > 1) {
    if (!s.marked(j)) throw ConfigError("component " + std::to_string(j) + " carries no marks");
    bin_of = assign_bins(s, j, bins.edges);
  }
  const PairLags lags = collect_lags(s, i, j, reach, s.horizon() - reach);
  std::vector<Accumulated> acc(M, Accumulated{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0});
  for (std::size_t k = 0; k < lags.conditioning; ++k) ++acc[bin_of[k]].conditioning;
  for (std::size_t p = 0; p < lags.lags.size(); ++p)
    accumulate(acc[bin_of[lags.source[p]]], lags.lags[p], c.h, step, n - 1, c.kernel);

  const double rate_i = static_cast<double>(s.size(i)) / s.horizon();
  const double rate_j = static_cast<double>(s.size(j)) / s.horizon();
  std::vector<CondLawEstimate> out;
  out.reserve(M);
  for (std::size_t l = 0; l < M; ++l)
    out.push_back(finish(acc[l], i, j, M > 1 ? static_cast<int>(l) : -1, c, rate_i, rate_j));
  return out;
}

CondLawEstimate negative_time_g(const CondLawEstimate& est_ji, double rate_i, double rate_j) {
  if (!(rate_j > 0.0)) throw ConfigError("negative-time reflection needs a positive rate for component j");
  CondLawEstimate e = est_ji;
  std::swap(e.i, e.j);
  std::swap(e.rate_i, e.rate_j);
  e.negative = !est_ji.negative;
  const double r = rate_i / rate_j;
  for (auto& v : e.values) v *= r;
  for (auto& v : e.primitive) v *= r;
  for (auto& v : e.count_primitive) v *= r;
  return e;
}

void write_condlaw_csv(const std::string& path, const CondLawEstimate& e) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "t,value,primitive,count_primitive\n";
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double t = e.negative ? -e.t(k) : e.t(k);
    out << format_double(t) << ',' << format_double(e.values[k]) << ',' << format_double(e.primitive[k]) << ','
        << format_double(e.count_primitive[k]) << '\n';
  }
}

}  // namespace hawkes
