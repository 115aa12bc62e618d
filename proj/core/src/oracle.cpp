#include "hawkes/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

#include "hawkes/error.hpp"
#include "hawkes/format.hpp"

namespace hawkes {
namespace {

using cplx = std::complex<double>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Real FFT of fixed length L with zero padding. The FFTW planner is not
// thread-safe, so plan creation and destruction are serialized.
class RealFft {
 public:
  explicit RealFft(std::size_t length) : length_(length), bins_(length / 2 + 1) {
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * length_));
    spec_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins_));
    std::lock_guard lock(planner_mutex());
    const int n = static_cast<int>(length_);
    forward_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t bins() const noexcept { return bins_; }

  std::vector<cplx> forward(const std::vector<double>& x) {
    std::fill(real_, real_ + length_, 0.0);
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(std::min(x.size(), length_)), real_);
    fftw_execute(forward_);
    std::vector<cplx> out(bins_);
    for (std::size_t k = 0; k < bins_; ++k) out[k] = cplx(spec_[k][0], spec_[k][1]);
    return out;
  }

  /// First `count` samples of the inverse transform, scaled by 1/L.
  std::vector<double> inverse(const std::vector<cplx>& x, std::size_t count) {
    for (std::size_t k = 0; k < bins_; ++k) {
      spec_[k][0] = x[k].real();
      spec_[k][1] = x[k].imag();
    }
    fftw_execute(inverse_);
    const double scale = 1.0 / static_cast<double>(length_);
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = real_[k] * scale;
    return out;
  }

 private:
  std::size_t length_;
  std::size_t bins_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

std::size_t padded_length(std::size_t n) {
  std::size_t L = 1;
  while (L < 2 * n) L <<= 1;
  return L;
}

double sup_abs(const MatrixSeries& m) {
  double s = 0.0;
  for (const auto& v : m.series)
    for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

std::vector<double> level_vector(const MarkFunction& f, std::size_t bins) {
  if (f.kind() == MarkFunction::Kind::One) return std::vector<double>(bins, f.scale());
  std::vector<double> out(f.levels().size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = f.scale() * f.levels()[l];
  return out;
}

std::vector<double> bin_probabilities_of(const MarkDistribution& d, const std::vector<double>& edges) {
  if (edges.empty()) return {1.0};
  const std::size_t M = edges.size() - 1;
  std::vector<double> p(M);
  for (std::size_t l = 0; l < M; ++l) {
    const double lo = l == 0 ? -HUGE_VAL : edges[l];
    const double hi = l + 1 == M ? HUGE_VAL : edges[l + 1];
    p[l] = interval_probability(d, lo, hi);
  }
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> trapezoid_convolution(const std::vector<double>& a, const std::vector<double>& b, double step) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return {};
  RealFft fft(padded_length(n));
  auto fa = fft.forward(a);
  const auto fb = fft.forward(b);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  auto c = fft.inverse(fa, n);
  for (std::size_t m = 0; m < n; ++m) c[m] = step * (c[m] - 0.5 * a[0] * b[m] - 0.5 * a[m] * b[0]);
  return c;
}

MatrixSeries sample_kernels(const HawkesModel& m, double step, std::size_t points) {
  MatrixSeries phi;
  phi.dim = m.dim();
  phi.step = step;
  phi.series.resize(static_cast<std::size_t>(m.dim() * m.dim()));
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      auto& s = phi.at(i, j);
      s.resize(points);
      const Kernel& k = m.kernel(i, j);
      for (std::size_t n = 0; n < points; ++n) s[n] = k(static_cast<double>(n) * step);
    }
  }
  return phi;
}

namespace {

// Sum over k of a^{ik} * b^{kj} for D x D matrix series, trapezoid rule.
MatrixSeries matrix_convolution(RealFft& fft, const std::vector<std::vector<cplx>>& fa, const MatrixSeries& a,
                                const MatrixSeries& b) {
  const int D = a.dim;
  const std::size_t n = a.points();
  std::vector<std::vector<cplx>> fb(b.series.size());
  for (std::size_t s = 0; s < b.series.size(); ++s) fb[s] = fft.forward(b.series[s]);
  MatrixSeries out;
  out.dim = D;
  out.step = a.step;
  out.series.resize(a.series.size());
  std::vector<cplx> acc(fft.bins());
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      std::fill(acc.begin(), acc.end(), cplx{});
      for (int k = 0; k < D; ++k) {
        const auto& x = fa[static_cast<std::size_t>(i * D + k)];
        const auto& y = fb[static_cast<std::size_t>(k * D + j)];
        for (std::size_t f = 0; f < acc.size(); ++f) acc[f] += x[f] * y[f];
      }
      auto c = fft.inverse(acc, n);
      for (int k = 0; k < D; ++k) {
        const auto& ak = a.at(i, k);
        const auto& bk = b.at(k, j);
        for (std::size_t m = 0; m < n; ++m) c[m] -= 0.5 * ak[0] * bk[m] + 0.5 * ak[m] * bk[0];
      }
      for (auto& v : c) v *= a.step;
      out.at(i, j) = std::move(c);
    }
  }
  return out;
}

}  // namespace

PsiResult neumann_psi(const MatrixSeries& phi, double tol, int max_iterations) {
  const int D = phi.dim;
  const std::size_t n = phi.points();
  if (D < 1 || n == 0) throw ConfigError("neumann_psi: empty kernel samples");

  // Stability from trapezoid norms of |phi|.
  Eigen::MatrixXd norms(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      const auto& s = phi.at(i, j);
      double acc = 0.0;
      for (std::size_t k = 1; k < n; ++k) acc += 0.5 * phi.step * (std::abs(s[k - 1]) + std::abs(s[k]));
      norms(i, j) = acc;
    }
  const double rho = spectral_radius(norms);
  if (rho >= 1.0) {
    std::ostringstream msg;
    msg << "Neumann series diverges: spectral radius of the sampled norms is " << rho;
    throw StabilityError(msg.str(), rho);
  }

  PsiResult res;
  res.psi = phi;
  if (sup_abs(phi) == 0.0) return res;

  RealFft fft(padded_length(n));
  std::vector<std::vector<cplx>> fphi(phi.series.size());
  for (std::size_t s = 0; s < phi.series.size(); ++s) fphi[s] = fft.forward(phi.series[s]);

  for (int it = 1; it <= max_iterations; ++it) {
    MatrixSeries next = matrix_convolution(fft, fphi, phi, res.psi);
    double change = 0.0;
    double scale = 0.0;
    for (std::size_t s = 0; s < next.series.size(); ++s) {
      auto& v = next.series[s];
      const auto& p = phi.series[s];
      const auto& old = res.psi.series[s];
      for (std::size_t k = 0; k < n; ++k) {
        v[k] += p[k];
        change = std::max(change, std::abs(v[k] - old[k]));
        scale = std::max(scale, std::abs(v[k]));
      }
    }
    res.psi = std::move(next);
    res.iterations = it;
    res.last_change = change;
    if (change <= tol * std::max(1.0, scale)) return res;
  }
  throw NumericalError("Neumann series did not converge within " + std::to_string(max_iterations) + " iterations");
}

double psi_identity_residual(const MatrixSeries& phi, const MatrixSeries& psi) {
  const std::size_t n = phi.points();
  RealFft fft(padded_length(n));
  std::vector<std::vector<cplx>> fphi(phi.series.size());
  for (std::size_t s = 0; s < phi.series.size(); ++s) fphi[s] = fft.forward(phi.series[s]);
  const MatrixSeries conv = matrix_convolution(fft, fphi, phi, psi);
  double r = 0.0;
  for (std::size_t s = 0; s < conv.series.size(); ++s)
    for (std::size_t k = 0; k < n; ++k)
      r = std::max(r, std::abs(phi.series[s][k] + conv.series[s][k] - psi.series[s][k]));
  return r;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> model_bins(const HawkesModel& m) {
  std::vector<std::vector<double>> edges(static_cast<std::size_t>(m.dim()));
  for (int j = 0; j < m.dim(); ++j) {
    for (int i = 0; i < m.dim(); ++i) {
      const MarkFunction& f = m.mark_function(i, j);
      switch (f.kind()) {
        case MarkFunction::Kind::One:
          break;
        case MarkFunction::Kind::Identity:
          throw ConfigError("mark function f^{" + std::to_string(i) + "," + std::to_string(j) +
                            "} is not piecewise constant; project it on bins first");
        case MarkFunction::Kind::PiecewiseConstant: {
          auto& e = edges[static_cast<std::size_t>(j)];
          if (e.empty())
            e = f.edges();
          else if (e != f.edges())
            throw ConfigError("mark functions of component " + std::to_string(j) + " use different bins");
          break;
        }
      }
    }
  }
  return edges;
}

HawkesModel project_marks(const HawkesModel& m, const std::vector<std::vector<double>>& edges) {
  if (edges.size() != static_cast<std::size_t>(m.dim())) throw ConfigError("project_marks: one edge list per component");
  HawkesModel::Spec spec = m.spec();
  const int D = m.dim();
  for (int j = 0; j < D; ++j) {
    const auto& e = edges[static_cast<std::size_t>(j)];
    if (e.empty()) continue;
    if (!m.marked(j)) throw ConfigError("project_marks: component " + std::to_string(j) + " is unmarked");
    const MarkDistribution& dist = m.mark_distribution(j);
    const std::size_t M = e.size() - 1;
    for (int i = 0; i < D; ++i) {
      const MarkFunction& f = m.mark_function(i, j);
      std::vector<double> levels(M, 0.0);
      for (std::size_t l = 0; l < M; ++l) {
        const double lo = l == 0 ? -HUGE_VAL : e[l];
        const double hi = l + 1 == M ? HUGE_VAL : e[l + 1];
        const double p = interval_probability(dist, lo, hi);
        switch (f.kind()) {
          case MarkFunction::Kind::One:
            levels[l] = f.scale();
            break;
          case MarkFunction::Kind::Identity: {
            const double cm = conditional_mean(dist, lo, hi);
            levels[l] = p > 0.0 && std::isfinite(cm) ? f.scale() * cm : 0.0;
            break;
          }
          case MarkFunction::Kind::PiecewiseConstant: {
            if (!(p > 0.0)) break;
            // Split [lo, hi) at the edges of f and weight its levels.
            std::vector<double> cuts{lo};
            for (double x : f.edges())
              if (x > lo && x < hi) cuts.push_back(x);
            cuts.push_back(hi);
            double acc = 0.0;
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
              const double a = cuts[s], b = cuts[s + 1];
              const double ps = interval_probability(dist, a, b);
              if (ps <= 0.0) continue;
              const double probe = std::isinf(a) ? (std::isinf(b) ? 0.0 : b - 1.0) : (std::isinf(b) ? a + 1.0 : 0.5 * (a + b));
              acc += ps * f(probe);
            }
            levels[l] = acc / p;
            break;
          }
        }
      }
      spec.mark_functions[static_cast<std::size_t>(i * D + j)] = MarkFunction::piecewise(e, std::move(levels));
    }
  }
  return HawkesModel(std::move(spec));
}

MarkedEquivalent marked_equivalent(const HawkesModel& model, const std::vector<std::vector<double>>& edges) {
  const HawkesModel m = edges.empty() ? model : project_marks(model, edges);
  const auto bins = model_bins(m);
  const int D = m.dim();
  MarkedEquivalent out{HawkesModel(HawkesModel::Spec{Eigen::VectorXd::Zero(1), {Kernel{}}, {}, {}, false}), {}, {}};
  int total = 0;
  for (int j = 0; j < D; ++j) {
    out.offset.push_back(total);
    const auto& e = bins[static_cast<std::size_t>(j)];
    out.probabilities.push_back(e.empty() ? std::vector<double>{1.0}
                                          : bin_probabilities_of(m.mark_distribution(j), e));
    total += static_cast<int>(out.probabilities.back().size());
  }

  HawkesModel::Spec spec;
  spec.baseline.resize(total);
  spec.kernels.resize(static_cast<std::size_t>(total) * static_cast<std::size_t>(total));
  spec.rectified = m.rectified();
  for (int i = 0; i < D; ++i) {
    const auto& pi = out.probabilities[static_cast<std::size_t>(i)];
    for (std::size_t l = 0; l < pi.size(); ++l) {
      const int row = out.offset[static_cast<std::size_t>(i)] + static_cast<int>(l);
      spec.baseline(row) = m.baseline()(i) * pi[l];
      for (int k = 0; k < D; ++k) {
        const auto& pk = out.probabilities[static_cast<std::size_t>(k)];
        const auto f = level_vector(m.mark_function(i, k), pk.size());
        for (std::size_t mm = 0; mm < pk.size(); ++mm) {
          const int col = out.offset[static_cast<std::size_t>(k)] + static_cast<int>(mm);
          spec.kernels[static_cast<std::size_t>(row) * static_cast<std::size_t>(total) + static_cast<std::size_t>(col)] =
              m.kernel(i, k).scaled(pi[l] * f[mm]);
        }
      }
    }
  }
  out.model = HawkesModel(std::move(spec));
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<double>& OracleTable::G(int i, int j, int l) const {
  return positive[static_cast<std::size_t>(i * dim + j)][static_cast<std::size_t>(l)];
}

const std::vector<double>& OracleTable::G_negative(int i, int j) const {
  return negative[static_cast<std::size_t>(i * dim + j)];
}

namespace {

double interpolate(const std::vector<double>& v, double step, double t) {
  if (v.empty()) return 0.0;
  const double x = t / step;
  if (x >= static_cast<double>(v.size() - 1)) return v.back();
  const auto k = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * v[k] + w * v[k + 1];
}

}  // namespace

double OracleTable::g(int i, int j, double t) const {
  if (t < 0.0) return interpolate(G_negative(i, j), step, -t);
  const auto& p = bin_probabilities[static_cast<std::size_t>(j)];
  double acc = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) acc += p[l] * interpolate(G(i, j, static_cast<int>(l)), step, t);
  return acc;
}

double OracleTable::G_at(int i, int j, int l, double t) const { return interpolate(G(i, j, l), step, t); }

OracleTable oracle_g(const HawkesModel& m, const OracleConfig& c) {
  if (!(c.step > 0.0) || !(c.horizon > c.step)) throw ConfigError("oracle: need step > 0 and horizon > step");
  const int D = m.dim();
  const auto DD = static_cast<std::size_t>(D * D);
  const std::size_t N = static_cast<std::size_t>(std::llround(c.horizon / c.step)) + 1;
  const double t_out = c.output_horizon > 0.0 ? c.output_horizon : 0.5 * c.horizon;
  const std::size_t n_out = std::min(N, static_cast<std::size_t>(std::llround(t_out / c.step)) + 1);

  OracleTable o;
  o.dim = D;
  o.step = c.step;
  o.rates = mean_rate(m);
  for (int j = 0; j < D; ++j)
    if (!(o.rates(j) > 0.0)) throw ConfigError("oracle: component " + std::to_string(j) + " has a zero mean rate");
  o.bin_edges = model_bins(m);
  for (int j = 0; j < D; ++j)
    o.bin_probabilities.push_back(bin_probabilities_of(m.mark_distribution(j), o.bin_edges[static_cast<std::size_t>(j)]));

  const MatrixSeries phi = sample_kernels(m, c.step, N);
  PsiResult pr = neumann_psi(phi, c.tol, c.max_iterations);
  o.psi_iterations = pr.iterations;
  const MatrixSeries& psi = pr.psi;

  RealFft fft(padded_length(N));
  // B^{iqk} = Psi^{iq} * phi^{qk}
  std::vector<std::vector<cplx>> fpsi(DD), fphi(DD);
  for (std::size_t s = 0; s < DD; ++s) {
    fpsi[s] = fft.forward(psi.series[s]);
    fphi[s] = fft.forward(phi.series[s]);
  }
  auto B = [&](int i, int q, int k) {
    const auto& x = fpsi[static_cast<std::size_t>(i * D + q)];
    const auto& y = fphi[static_cast<std::size_t>(q * D + k)];
    std::vector<cplx> prod(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) prod[f] = x[f] * y[f];
    auto out = fft.inverse(prod, N);
    const auto& a = psi.at(i, q);
    const auto& b = phi.at(q, k);
    for (std::size_t n = 0; n < N; ++n) out[n] = c.step * (out[n] - 0.5 * a[0] * b[n] - 0.5 * a[n] * b[0]);
    return out;
  };

  // chi[i*D+k][n] = f^{ik}_n phi^{ik} + sum_q f^{qk}_n B^{iqk}
  std::vector<std::vector<std::vector<double>>> chi(DD);
  {
    std::vector<std::vector<double>> Bs(static_cast<std::size_t>(D * D * D));
    for (int i = 0; i < D; ++i)
      for (int q = 0; q < D; ++q)
        for (int k = 0; k < D; ++k)
          if (!psi.at(i, q).empty()) Bs[static_cast<std::size_t>((i * D + q) * D + k)] = B(i, q, k);
    for (int i = 0; i < D; ++i) {
      for (int k = 0; k < D; ++k) {
        const std::size_t M = o.bin_probabilities[static_cast<std::size_t>(k)].size();
        auto& out = chi[static_cast<std::size_t>(i * D + k)];
        out.assign(M, std::vector<double>(N, 0.0));
        const auto fik = level_vector(m.mark_function(i, k), M);
        for (std::size_t l = 0; l < M; ++l) {
          auto& v = out[l];
          const auto& p = phi.at(i, k);
          for (std::size_t n = 0; n < N; ++n) v[n] = fik[l] * p[n];
          for (int q = 0; q < D; ++q) {
            const double fq = level_vector(m.mark_function(q, k), M)[l];
            const auto& b = Bs[static_cast<std::size_t>((i * D + q) * D + k)];
            for (std::size_t n = 0; n < N; ++n) v[n] += fq * b[n];
          }
        }
      }
    }
  }

  // X^{ij}(tau) = sum_{k,n} Lambda^k p^k_n int_0^inf chi_n^{ik}(tau + s) chi_n^{jk}(s) ds
  std::vector<std::vector<std::vector<cplx>>> fchi(DD);
  for (std::size_t s = 0; s < DD; ++s)
    for (const auto& v : chi[s]) fchi[s].push_back(fft.forward(v));
  std::vector<std::vector<double>> X(DD);
  std::vector<cplx> acc(fft.bins());
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      std::fill(acc.begin(), acc.end(), cplx{});
      for (int k = 0; k < D; ++k) {
        const auto& pk = o.bin_probabilities[static_cast<std::size_t>(k)];
        for (std::size_t n = 0; n < pk.size(); ++n) {
          const double w = o.rates(k) * pk[n];
          if (w == 0.0) continue;
          const auto& a = fchi[static_cast<std::size_t>(i * D + k)][n];
          const auto& b = fchi[static_cast<std::size_t>(j * D + k)][n];
          for (std::size_t f = 0; f < acc.size(); ++f) acc[f] += w * a[f] * std::conj(b[f]);
        }
      }
      auto x = fft.inverse(acc, n_out);
      for (std::size_t mm = 0; mm < n_out; ++mm) {
        double corr = 0.0;
        for (int k = 0; k < D; ++k) {
          const auto& pk = o.bin_probabilities[static_cast<std::size_t>(k)];
          for (std::size_t n = 0; n < pk.size(); ++n) {
            const double w = o.rates(k) * pk[n];
            const auto& a = chi[static_cast<std::size_t>(i * D + k)][n];
            const auto& b = chi[static_cast<std::size_t>(j * D + k)][n];
            corr += w * (0.5 * a[mm] * b[0] + 0.5 * a[N - 1] * b[N - 1 - mm]);
          }
        }
        x[mm] = c.step * (x[mm] - corr);
      }
      X[static_cast<std::size_t>(i * D + j)] = std::move(x);
    }
  }

  o.psi = std::move(pr.psi);
  o.positive.resize(DD);
  o.negative.resize(DD);
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      const auto ij = static_cast<std::size_t>(i * D + j);
      const auto ji = static_cast<std::size_t>(j * D + i);
      const double lj = o.rates(j);
      const std::size_t M = o.bin_probabilities[static_cast<std::size_t>(j)].size();
      o.positive[ij].assign(M, std::vector<double>(n_out));
      for (std::size_t l = 0; l < M; ++l)
        for (std::size_t k = 0; k < n_out; ++k) o.positive[ij][l][k] = chi[ij][l][k] + X[ij][k] / lj;
      auto& neg = o.negative[ij];
      neg.resize(n_out);
      const auto& psi_ji = o.psi.at(j, i);
      for (std::size_t k = 0; k < n_out; ++k) neg[k] = (o.rates(i) / lj) * psi_ji[k] + X[ji][k] / lj;
    }
  }
  // The mark average of the bins is shifted onto Psi^{ij} + X^{ij} / Lambda^j:
  // the trapezoid products Psi * phi and phi * Psi differ at O(step^2), and
  // the reflection identity should hold on the grid exactly.
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      const auto ij = static_cast<std::size_t>(i * D + j);
      const auto& p = o.bin_probabilities[static_cast<std::size_t>(j)];
      const auto& psi_ij = o.psi.at(i, j);
      for (std::size_t k = 0; k < n_out; ++k) {
        double avg = 0.0;
        for (std::size_t l = 0; l < p.size(); ++l) avg += p[l] * chi[ij][l][k];
        const double shift = psi_ij[k] - avg;
        for (auto& bin : o.positive[ij]) bin[k] += shift;
      }
    }
  }
  return o;
}

// ---------------------------------------------------------------------------

double exponential_psi(double alpha, double b, double t) {
  if (t < 0.0) return 0.0;
  return alpha * std::exp(-(b - alpha) * t);
}

double exponential_g(double alpha, double b, double t) {
  const double c = b - alpha;
  return (alpha + alpha * alpha / (2.0 * c)) * std::exp(-c * std::abs(t));
}

void write_oracle_csv(const std::string& path, const OracleTable& o, int i, int j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  const int M = o.bins(j);
  out << "t,g";
  if (M > 1)
    for (int l = 0; l < M; ++l) out << ",G_" << l;
  out << '\n';
  const std::size_t n = o.points();
  for (std::size_t k = n - 1; k >= 1; --k)
    out << format_double(-static_cast<double>(k) * o.step) << ',' << format_double(o.G_negative(i, j)[k]) << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * o.step;
    out << format_double(t) << ',' << format_double(o.g(i, j, t));
    if (M > 1)
      for (int l = 0; l < M; ++l) out << ',' << format_double(o.G(i, j, l)[k]);
    out << '\n';
  }
}

}  // namespace hawkes
