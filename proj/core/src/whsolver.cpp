#include "hawkes/whsolver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "hawkes/diagnostics.hpp"
#include "hawkes/error.hpp"
#include "hawkes/format.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

Quadrature gauss_nodes(int Q, double A) {
  if (Q < 1) throw ConfigError("quadrature needs Q >= 1");
  if (!(A > 0.0) || !std::isfinite(A)) throw ConfigError("quadrature interval length must be > 0");
  Quadrature quad;
  quad.count = Q;
  quad.length = A;
  quad.nodes.resize(static_cast<std::size_t>(Q));
  quad.weights.resize(static_cast<std::size_t>(Q));
  const int half = (Q + 1) / 2;
  for (int k = 1; k <= half; ++k) {
    double x = std::cos(std::numbers::pi * (k - 0.25) / (Q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= Q; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      if (Q == 1) p0 = 1.0, p1 = x;
      // P_Q'(x) = Q (x P_Q - P_{Q-1}) / (x^2 - 1)
      dp = Q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= Q; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = Q * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x_k descends from near 1; store ascending on [0, A].
    const auto lo = static_cast<std::size_t>(k - 1);
    const auto hi = static_cast<std::size_t>(Q - k);
    quad.nodes[lo] = 0.5 * A * (1.0 - x);
    quad.nodes[hi] = 0.5 * A * (1.0 + x);
    quad.weights[lo] = quad.weights[hi] = 0.5 * A * w;
  }
  if (Q % 2 == 1) quad.nodes[static_cast<std::size_t>(Q / 2)] = 0.5 * A;
  return quad;
}

// ---------------------------------------------------------------------------

void WHInput::validate() const {
  if (dim < 1) throw ConfigError("Wiener-Hopf input: dimension must be >= 1");
  if (!(horizon > 0.0)) throw ConfigError("Wiener-Hopf input: horizon A must be > 0");
  if (rates.size() != dim) throw ConfigError("Wiener-Hopf input: one rate per component expected");
  if (bin_probs.size() != static_cast<std::size_t>(dim)) throw ConfigError("Wiener-Hopf input: bin probabilities missing");
  if (G.size() != static_cast<std::size_t>(dim * dim)) throw ConfigError("Wiener-Hopf input: missing G entries");
  for (int j = 0; j < dim; ++j) {
    if (!(rates(j) > 0.0)) throw ConfigError("Wiener-Hopf input: rate of component " + std::to_string(j) + " is 0");
    if (bin_probs[static_cast<std::size_t>(j)].empty()) throw ConfigError("Wiener-Hopf input: component without bins");
  }
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      const auto& row = G[static_cast<std::size_t>(a * dim + b)];
      if (row.size() != bin_probs[static_cast<std::size_t>(b)].size())
        throw ConfigError("Wiener-Hopf input: G^{" + std::to_string(a) + "," + std::to_string(b) +
                          "} has the wrong number of bins");
      for (const auto& f : row)
        if (f.values().empty() || f.end() < horizon * (1.0 - 1e-9))
          throw ConfigError("Wiener-Hopf input: G^{" + std::to_string(a) + "," + std::to_string(b) +
                            "} does not cover [0, A]");
    }
  }
}

SystemLayout make_layout(const WHInput& in, int Q) {
  SystemLayout L;
  L.nodes = Q;
  int off = 0;
  for (int k = 0; k < in.dim; ++k) {
    L.offset.push_back(off);
    L.bins.push_back(in.bins(k));
    off += in.bins(k) * Q;
  }
  L.size = off;
  return L;
}

namespace {

// K^{kj}_{lm}(u) including the bin weight p^k_m.
struct KernelEntry {
  const GridFunction* pos;  // G^{kj}_l
  const GridFunction* neg;  // G^{jk}_m
  double p;                 // p^k_m
  double ratio;             // Lambda^k / Lambda^j

  double operator()(double u) const { return u >= 0.0 ? p * (*pos)(u) : p * ratio * (*neg)(-u); }
  double integral(double t, double A) const { return p * (pos->integral(t) + ratio * neg->integral(A - t)); }
};

KernelEntry entry(const WHInput& in, int j, int l, int k, int m) {
  return KernelEntry{&in.g(k, j, l), &in.g(j, k, m), in.bin_probs[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)],
                     in.rates(k) / in.rates(j)};
}

}  // namespace

Eigen::MatrixXd assemble_matrix(const WHInput& in, const Quadrature& quad) {
  in.validate();
  if (std::abs(quad.length - in.horizon) > 1e-12 * in.horizon)
    throw ConfigError("quadrature interval does not match the Wiener-Hopf horizon");
  const SystemLayout L = make_layout(in, quad.count);
  const int Q = quad.count;
  const double A = in.horizon;
  Eigen::MatrixXd mat = Eigen::MatrixXd::Identity(L.size, L.size);
  std::vector<double> kv(static_cast<std::size_t>(Q));
  for (int j = 0; j < in.dim; ++j) {
    for (int l = 0; l < in.bins(j); ++l) {
      for (int k = 0; k < in.dim; ++k) {
        for (int m = 0; m < in.bins(k); ++m) {
          const KernelEntry K = entry(in, j, l, k, m);
          for (int r = 0; r < Q; ++r) {
            const double t = quad.nodes[static_cast<std::size_t>(r)];
            const int row = L.index(j, l, r);
            double offsum = 0.0;
            for (int q = 0; q < Q; ++q) {
              if (q == r) continue;
              const double v = quad.weights[static_cast<std::size_t>(q)] * K(t - quad.nodes[static_cast<std::size_t>(q)]);
              mat(row, L.index(k, m, q)) += v;
              offsum += v;
            }
            mat(row, L.index(k, m, r)) += K.integral(t, A) - offsum;
          }
        }
      }
    }
  }
  return mat;
}

Eigen::VectorXd assemble_rhs(const WHInput& in, const Quadrature& quad, int i) {
  if (i < 0 || i >= in.dim) throw ConfigError("target component out of range");
  const SystemLayout L = make_layout(in, quad.count);
  Eigen::VectorXd b(L.size);
  for (int j = 0; j < in.dim; ++j)
    for (int l = 0; l < in.bins(j); ++l)
      for (int r = 0; r < quad.count; ++r) b(L.index(j, l, r)) = in.g(i, j, l)(quad.nodes[static_cast<std::size_t>(r)]);
  return b;
}

LinearSystem assemble(const WHInput& in, const Quadrature& quad, int i) {
  LinearSystem s;
  s.matrix = assemble_matrix(in, quad);
  s.rhs = assemble_rhs(in, quad, i);
  s.targets = {i};
  return s;
}

LinearSystem assemble_all(const WHInput& in, const Quadrature& quad) {
  LinearSystem s;
  s.matrix = assemble_matrix(in, quad);
  s.rhs.resize(s.matrix.rows(), in.dim);
  for (int i = 0; i < in.dim; ++i) {
    s.rhs.col(i) = assemble_rhs(in, quad, i);
    s.targets.push_back(i);
  }
  return s;
}

LinearSolution solve(const LinearSystem& s, double rcond_threshold) {
  if (s.matrix.rows() != s.matrix.cols() || s.matrix.rows() != s.rhs.rows())
    throw ConfigError("solve: inconsistent system dimensions");
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(s.matrix);
  LinearSolution out;
  out.rcond = lu.rcond();
  if (!(out.rcond >= rcond_threshold)) {
    std::ostringstream msg;
    msg << "Wiener-Hopf system is ill-conditioned (reciprocal condition estimate " << out.rcond
        << "); try a larger bandwidth h or a smaller quadrature count Q";
    throw IllConditionedError(msg.str(), out.rcond);
  }
  out.x = lu.solve(s.rhs);
  for (Eigen::Index c = 0; c < s.rhs.cols(); ++c) {
    const double bn = s.rhs.col(c).norm();
    const double rn = (s.matrix * out.x.col(c) - s.rhs.col(c)).norm();
    out.relative_residual = std::max(out.relative_residual, bn > 0.0 ? rn / bn : rn);
  }
  return out;
}

NystromSolution finalize(std::shared_ptr<const WHInput> input, const Quadrature& quad, const LinearSolution& sol) {
  const WHInput& in = *input;
  const int D = in.dim;
  NystromSolution out;
  out.dim = D;
  out.quad = quad;
  out.layout = make_layout(in, quad.count);
  out.input = input;
  out.rcond = sol.rcond;
  out.relative_residual = sol.relative_residual;
  if (sol.x.cols() != D) throw ConfigError("finalize: expected one solution column per target");

  const auto DD = static_cast<std::size_t>(D * D);
  out.nodes.resize(DD);
  out.combined.resize(DD);
  out.bin_norms.resize(DD);
  out.levels.resize(DD);
  out.levels_defined.assign(DD, false);
  out.norms.resize(D, D);
  const Eigen::Map<const Eigen::VectorXd> w(quad.weights.data(), quad.count);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      const auto ij = static_cast<std::size_t>(i * D + j);
      const int M = in.bins(j);
      Eigen::MatrixXd nv(M, quad.count);
      for (int m = 0; m < M; ++m)
        for (int q = 0; q < quad.count; ++q) nv(m, q) = sol.x(out.layout.index(j, m, q), i);
      Eigen::VectorXd comb = Eigen::VectorXd::Zero(quad.count);
      for (int m = 0; m < M; ++m) comb += in.bin_probs[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] * nv.row(m).transpose();
      const double norm = w.dot(comb);
      out.norms(i, j) = norm;
      auto& bn = out.bin_norms[ij];
      auto& lv = out.levels[ij];
      bn.resize(static_cast<std::size_t>(M));
      lv.resize(static_cast<std::size_t>(M));
      const bool defined = std::abs(norm) >= kUndefinedLevelNorm;
      for (int m = 0; m < M; ++m) {
        bn[static_cast<std::size_t>(m)] = w.dot(nv.row(m).transpose());
        lv[static_cast<std::size_t>(m)] =
            M == 1 ? 1.0 : (defined ? bn[static_cast<std::size_t>(m)] / norm : std::numeric_limits<double>::quiet_NaN());
      }
      out.levels_defined[ij] = M == 1 || defined;
      out.nodes[ij] = std::move(nv);
      out.combined[ij] = std::move(comb);
    }
  }
  out.spectral_radius = spectral_radius(out.norms);
  out.stable = out.spectral_radius < 1.0;
  return out;
}

NystromSolution solve_wiener_hopf(std::shared_ptr<const WHInput> input, int Q, double rcond_threshold) {
  const Quadrature quad = gauss_nodes(Q, input->horizon);
  const LinearSystem sys = assemble_all(*input, quad);
  return finalize(std::move(input), quad, solve(sys, rcond_threshold));
}

// ---------------------------------------------------------------------------

std::vector<double> uniform_grid(double A, std::size_t n) {
  if (n < 2) return {0.0};
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = A * static_cast<double>(k) / static_cast<double>(n - 1);
  g.back() = A;
  return g;
}

ResampledKernels resample(const NystromSolution& sol, const std::vector<double>& grid) {
  const WHInput& in = *sol.input;
  const int D = in.dim;
  const double A = in.horizon;
  const auto& quad = sol.quad;
  const int Q = quad.count;
  const auto DD = static_cast<std::size_t>(D * D);

  ResampledKernels out;
  out.dim = D;
  out.grid = grid;
  out.combined.assign(DD, std::vector<double>(grid.size(), 0.0));
  out.per_bin.resize(DD);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      out.per_bin[static_cast<std::size_t>(i * D + j)].assign(static_cast<std::size_t>(in.bins(j)),
                                                              std::vector<double>(grid.size(), 0.0));

  // Small layout over (component, bin) without nodes.
  std::vector<int> boff;
  int nb = 0;
  for (int k = 0; k < D; ++k) {
    boff.push_back(nb);
    nb += in.bins(k);
  }

  Eigen::MatrixXd B(nb, nb);
  Eigen::MatrixXd rhs(nb, D);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    if (t < -1e-12 * A || t > A * (1.0 + 1e-12))
      throw ConfigError("resample grid point " + format_double(t) + " outside [0, A]");
    const auto hit = std::find(quad.nodes.begin(), quad.nodes.end(), t);
    Eigen::MatrixXd y(nb, D);
    if (hit != quad.nodes.end()) {
      const int q = static_cast<int>(hit - quad.nodes.begin());
      for (int i = 0; i < D; ++i)
        for (int k = 0; k < D; ++k)
          for (int m = 0; m < in.bins(k); ++m) y(boff[static_cast<std::size_t>(k)] + m, i) = sol.node_values(i, k)(m, q);
    } else {
      B.setIdentity();
      for (int j = 0; j < D; ++j) {
        for (int l = 0; l < in.bins(j); ++l) {
          const int row = boff[static_cast<std::size_t>(j)] + l;
          for (int i = 0; i < D; ++i) rhs(row, i) = in.g(i, j, l)(t);
          for (int k = 0; k < D; ++k) {
            for (int m = 0; m < in.bins(k); ++m) {
              const KernelEntry K = entry(in, j, l, k, m);
              double wsum = 0.0;
              for (int q = 0; q < Q; ++q) {
                const double v = quad.weights[static_cast<std::size_t>(q)] * K(t - quad.nodes[static_cast<std::size_t>(q)]);
                wsum += v;
                for (int i = 0; i < D; ++i) rhs(row, i) -= v * sol.node_values(i, k)(m, q);
              }
              B(row, boff[static_cast<std::size_t>(k)] + m) += K.integral(t, A) - wsum;
            }
          }
        }
      }
      y = B.partialPivLu().solve(rhs);
    }
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) {
        const auto ij = static_cast<std::size_t>(i * D + j);
        double c = 0.0;
        for (int m = 0; m < in.bins(j); ++m) {
          const double v = y(boff[static_cast<std::size_t>(j)] + m, i);
          out.per_bin[ij][static_cast<std::size_t>(m)][g] = v;
          c += in.bin_probs[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] * v;
        }
        out.combined[ij][g] = c;
      }
    }
  }
  return out;
}

double relative_l2_change(const ResampledKernels& a, const ResampledKernels& b) {
  if (a.grid != b.grid || a.combined.size() != b.combined.size())
    throw ConfigError("relative_l2_change: kernels on different grids");
  const std::size_t n = a.grid.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = 0.5 * (a.grid[k + 1] - a.grid[k]);
    w[k] += h;
    w[k + 1] += h;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < a.combined.size(); ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = a.combined[s][k] - b.combined[s][k];
      num += w[k] * d * d;
      den += w[k] * a.combined[s][k] * a.combined[s][k];
    }
  }
  if (!(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(num / den);
}

QSelection select_Q(const std::function<ResampledKernels(int)>& pipeline, int Q0, double threshold, int cap) {
  if (Q0 < 4) throw ConfigError("select_Q: Q0 must be >= 4");
  if (cap < 2 * Q0) throw ConfigError("select_Q: cap must allow at least one doubling");
  QSelection sel;
  int Q = Q0;
  ResampledKernels prev = pipeline(Q);
  double best_R = std::numeric_limits<double>::infinity();
  int best_Q = Q0;
  while (2 * Q <= cap) {
    ResampledKernels next = pipeline(2 * Q);
    const double R = relative_l2_change(prev, next);
    if (std::isnan(R)) {
      sel.Q = Q0;
      sel.R = R;
      sel.degenerate = true;
      return sel;
    }
    sel.history.emplace_back(Q, R);
    if (R < best_R) {
      best_R = R;
      best_Q = Q;
    }
    if (R < threshold) {
      sel.Q = Q;
      sel.R = R;
      sel.converged = true;
      return sel;
    }
    Q *= 2;
    prev = std::move(next);
  }
  sel.Q = best_Q;
  sel.R = best_R;
  std::ostringstream msg;
  msg << "quadrature selection reached the cap Q = " << cap << " without R_Q < " << threshold << "; using Q = " << best_Q
      << " (R_Q = " << best_R << ")";
  warn(msg.str());
  return sel;
}

void write_kernel_csv(const std::string& path, const ResampledKernels& k, int i, int j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  const auto ij = static_cast<std::size_t>(i * k.dim + j);
  const std::size_t M = k.per_bin[ij].size();
  out << "t,phi";
  if (M > 1)
    for (std::size_t m = 0; m < M; ++m) out << ",phi_" << m;
  out << '\n';
  for (std::size_t g = 0; g < k.grid.size(); ++g) {
    out << format_double(k.grid[g]) << ',' << format_double(k.combined[ij][g]);
    if (M > 1)
      for (std::size_t m = 0; m < M; ++m) out << ',' << format_double(k.per_bin[ij][m][g]);
    out << '\n';
  }
}

}  // namespace hawkes
