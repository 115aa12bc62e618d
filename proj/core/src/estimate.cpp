#include "hawkes/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/parallel.hpp"

namespace hawkes {

std::vector<MarkBins> resolve_bins(const EventSeries& s, const EstimationConfig& c) {
  const int D = s.dim();
  if (!c.bin_edges.empty() && c.bin_edges.size() != static_cast<std::size_t>(D))
    throw ConfigError("expected bin edges for each of the " + std::to_string(D) + " components");
  std::vector<MarkBins> bins;
  for (int j = 0; j < D; ++j) {
    const std::vector<double>* edges = c.bin_edges.empty() ? nullptr : &c.bin_edges[static_cast<std::size_t>(j)];
    if (edges == nullptr || edges->empty()) {
      bins.push_back(single_bin(s.size(j)));
      continue;
    }
    if (!s.marked(j)) throw ConfigError("mark bins given for unmarked component " + std::to_string(j));
    MarkBins b = mark_bin_probabilities(s, j, *edges);
    if (std::find(b.counts.begin(), b.counts.end(), std::size_t{0}) != b.counts.end()) {
      const auto merged = merge_empty_bins(b.edges, b.counts);
      std::ostringstream msg;
      msg << "component " << j << ": empty mark bins merged (" << b.size() << " -> " << merged.size() - 1 << " bins)";
      warn(msg.str());
      b = mark_bin_probabilities(s, j, merged);
    }
    bins.push_back(std::move(b));
  }
  return bins;
}

std::shared_ptr<WHInput> build_input(const EventSeries& s, const std::vector<MarkBins>& bins, const Eigen::MatrixXd& h,
                                     const EstimationConfig& c) {
  const int D = s.dim();
  auto in = std::make_shared<WHInput>();
  in->dim = D;
  in->horizon = c.t_max;
  in->rates = empirical_rates(s);
  for (int j = 0; j < D; ++j) in->bin_probs.push_back(bins[static_cast<std::size_t>(j)].probabilities);
  in->G.resize(static_cast<std::size_t>(D * D));
  const unsigned threads = c.threads ? c.threads : default_thread_count();
  parallel_for(static_cast<std::size_t>(D * D), threads, [&](std::size_t ab) {
    const int a = static_cast<int>(ab) / D, b = static_cast<int>(ab) % D;
    CondLawConfig cc;
    cc.h = h(a, b);
    cc.t_max = c.t_max;
    cc.kernel = SmoothingKernel(c.kernel_order);
    const MarkBins& mb = bins[static_cast<std::size_t>(b)];
    std::vector<CondLawEstimate> est;
    if (mb.size() == 1)
      est.push_back(estimate_g(s, a, b, cc));
    else
      est = estimate_G_marked(s, a, b, mb, cc);
    auto& row = in->G[ab];
    for (auto& e : est) {
      const double origin = e.centering_offset();
      if (c.primitive == PrimitiveMode::Count)
        row.emplace_back(origin, e.step, std::move(e.values), std::move(e.count_primitive));
      else
        row.emplace_back(origin, e.step, std::move(e.values));
    }
  });
  return in;
}

std::shared_ptr<WHInput> oracle_input(const OracleTable& o, double A) {
  const double covered = o.step * static_cast<double>(o.points() - 1);
  if (A > covered) throw ConfigError("oracle table does not cover the horizon A");
  auto in = std::make_shared<WHInput>();
  in->dim = o.dim;
  in->horizon = A;
  in->rates = o.rates;
  in->bin_probs = o.bin_probabilities;
  in->G.resize(static_cast<std::size_t>(o.dim * o.dim));
  for (int a = 0; a < o.dim; ++a)
    for (int b = 0; b < o.dim; ++b)
      for (int l = 0; l < o.bins(b); ++l)
        in->G[static_cast<std::size_t>(a * o.dim + b)].emplace_back(0.0, o.step, o.G(a, b, l));
  return in;
}

Eigen::VectorXd estimated_baseline(const Eigen::MatrixXd& norms, const Eigen::VectorXd& rates) {
  return (Eigen::MatrixXd::Identity(norms.rows(), norms.cols()) - norms) * rates;
}

EstimationResult estimate(const EventSeries& s, const EstimationConfig& c) {
  if (!(c.t_max > 0.0)) throw ConfigError("t_max must be > 0");
  if (c.Q < 0) throw ConfigError("Q must be >= 1 (or 0 for automatic selection)");
  const int D = s.dim();
  EstimationResult r;
  r.config = c;
  r.rates = empirical_rates(s);
  for (int j = 0; j < D; ++j)
    if (!(r.rates(j) > 0.0)) throw ConfigError("component " + std::to_string(j) + " has no events");
  r.bins = resolve_bins(s, c);
  r.config.bin_edges.clear();
  for (const auto& b : r.bins) r.config.bin_edges.push_back(b.size() > 1 ? b.edges : std::vector<double>{});

  r.h.resize(D, D);
  if (c.h > 0.0) {
    r.h.setConstant(c.h);
  } else {
    BandwidthConfig bc;
    bc.t_max = c.t_max;
    bc.blocks = c.blocks;
    bc.kernel = SmoothingKernel(c.kernel_order);
    bc.threads = c.threads;
    const std::vector<double> grid = c.h_grid.empty() ? default_h_grid(s, c.t_max) : c.h_grid;
    r.config.h_grid = grid;
    for (int a = 0; a < D; ++a) {
      for (int b = 0; b < D; ++b) {
        r.scans.push_back(select_bandwidth(s, a, b, grid, bc));
        r.h(a, b) = r.scans.back().h_star;
      }
    }
  }

  const auto input = build_input(s, r.bins, r.h, c);
  int Q = c.Q;
  if (Q == 0) {
    const std::vector<double> common = uniform_grid(c.t_max, 513);
    r.q_selection = select_Q(
        [&](int q) { return resample(solve_wiener_hopf(input, q, c.rcond_threshold), common); }, c.Q0,
        c.Q_threshold, c.Q_cap);
    Q = r.q_selection->Q;
  }
  r.config.Q = Q;
  r.solution = solve_wiener_hopf(input, Q, c.rcond_threshold);
  const std::size_t n = c.grid_points ? c.grid_points : static_cast<std::size_t>(8 * Q + 1);
  r.config.grid_points = n;
  r.kernels = resample(r.solution, uniform_grid(c.t_max, n));
  r.baseline = estimated_baseline(r.solution.norms, r.rates);
  if (!r.solution.stable) {
    std::ostringstream msg;
    msg << "estimated kernel norms have spectral radius " << r.solution.spectral_radius << " >= 1";
    warn(msg.str());
  }
  return r;
}

HawkesModel estimated_model(const EstimationResult& r, const EventSeries& s) {
  const int D = r.solution.dim;
  HawkesModel::Spec spec;
  spec.baseline = r.baseline;
  const auto& grid = r.kernels.grid;
  const double step = grid.size() > 1 ? grid[1] - grid[0] : r.config.t_max;
  bool negative = (r.baseline.array() < 0.0).any();
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      const auto& v = r.kernels.kernel(i, j);
      negative = negative || std::any_of(v.begin(), v.end(), [](double x) { return x < 0.0; });
      spec.kernels.push_back(Kernel::sampled(step, v));
    }
  }
  bool any_marks = false;
  for (int j = 0; j < D; ++j) any_marks = any_marks || r.bins[static_cast<std::size_t>(j)].size() > 1;
  if (any_marks) {
    for (int j = 0; j < D; ++j) {
      if (r.bins[static_cast<std::size_t>(j)].size() > 1)
        spec.marks.emplace_back(empirical_marks(s.marks(j)));
      else
        spec.marks.emplace_back(NoMarks{});
    }
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) {
        const MarkBins& b = r.bins[static_cast<std::size_t>(j)];
        if (b.size() <= 1) {
          spec.mark_functions.push_back(MarkFunction::one());
          continue;
        }
        std::vector<double> levels = r.solution.levels[static_cast<std::size_t>(i * D + j)];
        for (double& x : levels) x = std::isnan(x) ? 1.0 : std::max(x, 0.0);
        if (std::all_of(levels.begin(), levels.end(), [](double x) { return x == 0.0; })) levels.assign(levels.size(), 1.0);
        spec.mark_functions.push_back(MarkFunction::piecewise(b.edges, std::move(levels)));
      }
    }
  }
  spec.rectified = negative;
  return HawkesModel(std::move(spec));
}

}  // namespace hawkes
