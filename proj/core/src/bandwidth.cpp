#include "hawkes/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/format.hpp"
#include "hawkes/parallel.hpp"

namespace hawkes {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// All pair lags below max_lag sorted by lag, with the conditioning time and block.
struct LagTable {
  std::vector<double> lag;
  std::vector<double> source_time;
  std::vector<int> block;
  std::vector<double> conditioning_times;  // every conditioning candidate of j
  int blocks = 1;
  double horizon = 0.0;
};

int block_of(double t, double T, int R) {
  const auto b = static_cast<int>(std::floor(t * R / T));
  return std::clamp(b, 0, R - 1);
}

LagTable build_table(const EventSeries& s, int i, int j, double max_lag, double last_conditioning, int R) {
  const PairLags raw = collect_lags(s, i, j, max_lag, last_conditioning);
  const auto& tj = s.times(j);
  std::vector<std::size_t> order(raw.lags.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw.lags[a] < raw.lags[b]; });
  LagTable t;
  t.blocks = R;
  t.horizon = s.horizon();
  t.lag.reserve(order.size());
  t.source_time.reserve(order.size());
  t.block.reserve(order.size());
  for (std::size_t k : order) {
    const double st = tj[raw.source[k]];
    t.lag.push_back(raw.lags[k]);
    t.source_time.push_back(st);
    t.block.push_back(block_of(st, s.horizon(), R));
  }
  t.conditioning_times.assign(tj.begin(), tj.begin() + static_cast<std::ptrdiff_t>(raw.conditioning));
  return t;
}

// Running power sums of the lags currently inside the window [x, x + h).
struct Window {
  long long count = 0;
  long double s1 = 0.0L;
  long double s2 = 0.0L;

  void add(double L) {
    ++count;
    s1 += L;
    s2 += static_cast<long double>(L) * L;
  }
  void remove(double L) {
    --count;
    s1 -= L;
    s2 -= static_cast<long double>(L) * L;
  }
  // sum over the window of K((L - x) / h)
  double kernel_sum(double x, double h, const std::vector<double>& c) const {
    long double v = c[0] * static_cast<long double>(count);
    if (c.size() > 1) v += c[1] * (s1 - static_cast<long double>(x) * count) / h;
    if (c.size() > 2) {
      const long double xl = x;
      v += c[2] * (s2 - 2.0L * xl * s1 + xl * xl * count) / (static_cast<long double>(h) * h);
    }
    return static_cast<double>(v);
  }
};

struct SweepResult {
  double square = 0.0;  // int g^2
  double linear = 0.0;  // int g
  double error = 0.0;   // int (g - truth)^2
  double query = 0.0;   // sum of g at the query lags
};

struct SweepSpec {
  double h = 0.0;
  double t_max = 0.0;
  double cutoff = 0.0;     // conditioning events later than this are ignored
  int exclude = -1;        // block left out of the estimate
  int query_block = -1;    // block whose lags in (0, t_max] are queried
  double normalization = 0.0;  // 1 / (J' h)
  double rate = 0.0;
  const std::vector<double>* coefficients = nullptr;
  const std::function<double(double)>* truth = nullptr;
};

SweepResult sweep(const LagTable& tab, const SweepSpec& sp) {
  const auto& L = tab.lag;
  const double h = sp.h;
  const auto n = static_cast<std::size_t>(std::lower_bound(L.begin(), L.end(), sp.t_max + h) - L.begin());
  auto in_estimate = [&](std::size_t k) { return tab.source_time[k] <= sp.cutoff && tab.block[k] != sp.exclude; };
  auto is_query = [&](std::size_t k) {
    return tab.block[k] == sp.query_block && tab.source_time[k] <= sp.cutoff && L[k] > 0.0 && L[k] <= sp.t_max;
  };
  const auto& coef = *sp.coefficients;
  const bool exact_constant = coef.size() == 1 && sp.truth == nullptr;

  Window w;
  SweepResult out;
  auto g = [&](double x) { return sp.normalization * w.kernel_sum(x, h, coef) - sp.rate; };
  auto integrate = [&](double a, double b) {
    if (!(b > a)) return;
    if (exact_constant) {
      const double v = g(0.5 * (a + b));
      out.square += v * v * (b - a);
      out.linear += v * (b - a);
      return;
    }
    static constexpr double kNode = 0.7745966692414834;  // sqrt(3/5)
    static constexpr double kW[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double xs[3] = {mid - kNode * half, mid, mid + kNode * half};
    for (int q = 0; q < 3; ++q) {
      const double v = g(xs[q]);
      const double wq = kW[q] * half;
      out.square += wq * v * v;
      out.linear += wq * v;
      if (sp.truth) {
        const double e = v - (*sp.truth)(xs[q]);
        out.error += wq * e * e;
      }
    }
  };

  std::size_t ie = 0, il = 0, iq = 0;
  auto next_query = [&] {
    while (iq < n && !is_query(iq)) ++iq;
  };
  double x = 0.0;
  while (ie < n && L[ie] - h < x) {
    if (in_estimate(ie)) w.add(L[ie]);
    ++ie;
  }
  next_query();
  while (x < sp.t_max) {
    while (il < ie && !in_estimate(il)) ++il;
    double next = sp.t_max;
    if (ie < n) next = std::min(next, L[ie] - h);
    if (il < ie) next = std::min(next, L[il]);
    if (iq < n) next = std::min(next, L[iq]);
    integrate(x, next);
    x = next;
    while (iq < n && L[iq] <= x) {
      out.query += g(L[iq]);
      ++iq;
      next_query();
    }
    while (il < ie && L[il] <= x) {
      if (in_estimate(il)) w.remove(L[il]);
      ++il;
    }
    while (ie < n && L[ie] - h <= x) {
      if (in_estimate(ie)) w.add(L[ie]);
      ++ie;
    }
  }
  // Queries sitting exactly at t_max.
  while (iq < n && L[iq] <= sp.t_max) {
    out.query += g(L[iq]);
    ++iq;
    next_query();
  }
  return out;
}

void check_bandwidth_args(const EventSeries& s, int i, int j, double h, const BandwidthConfig& c) {
  if (i < 0 || j < 0 || i >= s.dim() || j >= s.dim()) throw ConfigError("component index out of range");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("bandwidth h must be > 0");
  if (!(c.t_max > 0.0)) throw ConfigError("t_max must be > 0");
  if (c.blocks < 2) throw ConfigError("the contrast needs R >= 2 blocks");
  if (!(s.horizon() / c.blocks > c.t_max))
    throw ConfigError("block length T/R = " + format_double(s.horizon() / c.blocks) + " must exceed t_max");
  if (c.t_max + h > s.horizon()) throw ConfigError("t_max + h exceeds the observation window");
}

std::vector<double> blocks_at(const LagTable& tab, const EventSeries& s, int i, double h, const BandwidthConfig& c,
                              const std::vector<double>& coef) {
  const int R = c.blocks;
  const double T = s.horizon();
  const double cutoff = T - (c.t_max + h);
  std::vector<long long> Jr(static_cast<std::size_t>(R), 0);
  long long J = 0;
  for (double t : tab.conditioning_times) {
    if (t > cutoff) break;
    ++Jr[static_cast<std::size_t>(block_of(t, T, R))];
    ++J;
  }
  const double rate = static_cast<double>(s.size(i)) / T;
  std::vector<double> out(static_cast<std::size_t>(R), kNaN);
  int skipped = 0;
  for (int r = 0; r < R; ++r) {
    const long long jr = Jr[static_cast<std::size_t>(r)];
    const long long train = J - jr;
    if (jr == 0 || train == 0) {
      ++skipped;
      continue;
    }
    SweepSpec sp;
    sp.h = h;
    sp.t_max = c.t_max;
    sp.cutoff = cutoff;
    sp.exclude = r;
    sp.query_block = r;
    sp.normalization = 1.0 / (static_cast<double>(train) * h);
    if (c.leave_out_rate) {
      long long ni = 0;
      for (double t : s.times(i))
        if (block_of(t, T, R) != r) ++ni;
      sp.rate = static_cast<double>(ni) / (T * (1.0 - 1.0 / R));
    } else {
      sp.rate = rate;
    }
    sp.coefficients = &coef;
    const SweepResult res = sweep(tab, sp);
    out[static_cast<std::size_t>(r)] =
        res.square + 2.0 * sp.rate * res.linear -
        2.0 * res.query / (c.pooled_queries ? static_cast<double>(J) / R : static_cast<double>(jr));
  }
  if (skipped == R) throw ConfigError("contrast: every block is empty of conditioning events");
  if (skipped > 0) {
    std::ostringstream msg;
    msg << "contrast at h = " << h << ": " << skipped << " of " << R << " blocks without conditioning events skipped";
    warn(msg.str());
  }
  return out;
}

double average(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  // Sorted summation: the result does not depend on the block labelling.
  std::sort(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> block_contrasts(const EventSeries& s, int i, int j, double h, const BandwidthConfig& c) {
  check_bandwidth_args(s, i, j, h, c);
  const double reach = c.t_max + h;
  const LagTable tab = build_table(s, i, j, reach, s.horizon() - reach, c.blocks);
  return blocks_at(tab, s, i, h, c, c.kernel.coefficients());
}

double contrast(const EventSeries& s, int i, int j, double h, const BandwidthConfig& c) {
  return average(block_contrasts(s, i, j, h, c));
}

BandwidthScan select_bandwidth(const EventSeries& s, int i, int j, const std::vector<double>& grid,
                               const BandwidthConfig& c) {
  if (grid.empty()) throw ConfigError("bandwidth grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    check_bandwidth_args(s, i, j, grid[k], c);
    if (k > 0 && !(grid[k] > grid[k - 1])) throw ConfigError("bandwidth grid must be strictly increasing");
  }
  const LagTable tab =
      build_table(s, i, j, c.t_max + grid.back(), s.horizon() - (c.t_max + grid.front()), c.blocks);
  const std::vector<double> coef = c.kernel.coefficients();
  BandwidthScan scan;
  scan.grid = grid;
  scan.values.assign(grid.size(), kNaN);
  scan.block_values.assign(grid.size(), {});
  const unsigned threads = c.threads ? c.threads : default_thread_count();
  parallel_for(grid.size(), threads, [&](std::size_t k) {
    scan.block_values[k] = blocks_at(tab, s, i, grid[k], c, coef);
    scan.values[k] = average(scan.block_values[k]);
  });
  scan.best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (scan.values[k] < scan.values[scan.best]) scan.best = k;
  scan.h_star = grid[scan.best];
  return scan;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("geometric grid needs 0 < lo <= hi");
  if (n == 0) throw ConfigError("geometric grid needs at least one point");
  if (n == 1 || hi == lo) return {lo};
  std::vector<double> g(n);
  const double ratio = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) g[k] = lo * std::exp(ratio * static_cast<double>(k));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_h_grid(const EventSeries& s, double t_max, std::size_t n) {
  if (!(t_max > 0.0)) throw ConfigError("t_max must be > 0");
  double lo = t_max / 400.0;
  const double dt = median_inter_event_time(s);
  if (std::isfinite(dt) && dt > 0.0) lo = std::min(lo, dt / 4.0);
  return geometric_grid(lo, t_max / 4.0, n);
}

double integrated_squared_error(const EventSeries& s, int i, int j, double h, double t_max,
                                const std::function<double(double)>& truth, const SmoothingKernel& kernel) {
  if (i < 0 || j < 0 || i >= s.dim() || j >= s.dim()) throw ConfigError("component index out of range");
  if (!(h > 0.0) || !(t_max > 0.0)) throw ConfigError("h and t_max must be > 0");
  const double reach = t_max + h;
  if (reach > s.horizon()) throw ConfigError("t_max + h exceeds the observation window");
  const LagTable tab = build_table(s, i, j, reach, s.horizon() - reach, 1);
  const auto J = static_cast<double>(tab.conditioning_times.size());
  if (J == 0) throw ConfigError("no conditioning events");
  const std::vector<double> coef = kernel.coefficients();
  SweepSpec sp;
  sp.h = h;
  sp.t_max = t_max;
  sp.cutoff = s.horizon() - reach;
  sp.normalization = 1.0 / (J * h);
  sp.rate = static_cast<double>(s.size(i)) / s.horizon();
  sp.coefficients = &coef;
  sp.truth = &truth;
  return sweep(tab, sp).error;
}

void write_bandwidth_csv(const std::string& path, const BandwidthScan& scan) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "h,contrast\n";
  for (std::size_t k = 0; k < scan.grid.size(); ++k)
    out << format_double(scan.grid[k]) << ',' << format_double(scan.values[k]) << '\n';
}

}  // namespace hawkes
