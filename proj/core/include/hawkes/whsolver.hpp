#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/grid_function.hpp"

namespace hawkes {

struct Quadrature {
  int count = 0;
  double length = 0.0;
  std::vector<double> nodes;    // strictly increasing in (0, length)
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [0, A]. Nodes are the roots of P_Q found by Newton
/// iteration on the three-term recurrence from the Chebyshev-like guesses
/// cos(pi (k - 1/4) / (Q + 1/2)); weights 2 / ((1 - x^2) P_Q'(x)^2).
Quadrature gauss_nodes(int Q, double A);

/// Everything the marked Wiener-Hopf system needs: rates, bin probabilities
/// and the positive-time functions G^{ab}_l for all a, b and bins l of b.
struct WHInput {
  int dim = 0;
  double horizon = 0.0;                        // A: kernels are sought on [0, A]
  Eigen::VectorXd rates;                       // Lambda
  std::vector<std::vector<double>> bin_probs;  // p^j_l
  std::vector<std::vector<GridFunction>> G;    // G[a*D+b][l]

  int bins(int j) const { return static_cast<int>(bin_probs[static_cast<std::size_t>(j)].size()); }
  const GridFunction& g(int a, int b, int l) const {
    return G[static_cast<std::size_t>(a * dim + b)][static_cast<std::size_t>(l)];
  }
  /// Throws ConfigError when entries are missing, grids do not cover [0, A] or a rate is 0.
  void validate() const;
};

/// Unknowns are stacked as (k, m, q): component k, bin m of k, node q.
struct SystemLayout {
  std::vector<int> offset;  // first unknown of component k
  std::vector<int> bins;    // M^k
  int nodes = 0;
  int size = 0;

  int index(int k, int m, int q) const {
    return offset[static_cast<std::size_t>(k)] + m * nodes + q;
  }
};

SystemLayout make_layout(const WHInput& in, int Q);

/// The matrix does not depend on the target component i.
Eigen::MatrixXd assemble_matrix(const WHInput& in, const Quadrature& quad);

/// Right-hand side G^{ij}_l(s_q) for target i.
Eigen::VectorXd assemble_rhs(const WHInput& in, const Quadrature& quad, int i);

struct LinearSystem {
  Eigen::MatrixXd matrix;
  Eigen::MatrixXd rhs;  // one column per target i (or a single column)
  std::vector<int> targets;
};

/// System for a single target i.
LinearSystem assemble(const WHInput& in, const Quadrature& quad, int i);
/// System for all targets sharing one matrix.
LinearSystem assemble_all(const WHInput& in, const Quadrature& quad);

struct LinearSolution {
  Eigen::MatrixXd x;
  double rcond = 0.0;              // reciprocal 1-norm condition estimate
  double relative_residual = 0.0;  // max over columns of |Ax - b| / |b|
};

/// Dense LU with partial pivoting. Throws IllConditionedError when rcond < threshold.
LinearSolution solve(const LinearSystem& s, double rcond_threshold = 1e-13);

struct NystromSolution {
  int dim = 0;
  Quadrature quad;
  SystemLayout layout;
  std::shared_ptr<const WHInput> input;
  // node values phi^{ij}_m(s_q): nodes[i*D+j] is M^j x Q
  std::vector<Eigen::MatrixXd> nodes;
  // combined phi^{ij}(s_q) = sum_m p^j_m phi^{ij}_m(s_q)
  std::vector<Eigen::VectorXd> combined;
  Eigen::MatrixXd norms;                               // ||phi^{ij}||
  std::vector<std::vector<double>> bin_norms;          // ||phi^{ij}_m||
  std::vector<std::vector<double>> levels;             // f^{ij}_m, NaN when undefined
  std::vector<bool> levels_defined;
  double spectral_radius = 0.0;
  bool stable = false;
  double rcond = 0.0;
  double relative_residual = 0.0;

  const Eigen::MatrixXd& node_values(int i, int j) const { return nodes[static_cast<std::size_t>(i * dim + j)]; }
  const Eigen::VectorXd& combined_values(int i, int j) const {
    return combined[static_cast<std::size_t>(i * dim + j)];
  }
};

/// Norm threshold below which f levels are reported undefined.
inline constexpr double kUndefinedLevelNorm = 1e-9;

NystromSolution finalize(std::shared_ptr<const WHInput> input, const Quadrature& quad, const LinearSolution& sol);

/// assemble_all + solve + finalize.
NystromSolution solve_wiener_hopf(std::shared_ptr<const WHInput> input, int Q, double rcond_threshold = 1e-13);

struct ResampledKernels {
  int dim = 0;
  std::vector<double> grid;
  std::vector<std::vector<double>> combined;              // [i*D+j][t]
  std::vector<std::vector<std::vector<double>>> per_bin;  // [i*D+j][m][t]

  const std::vector<double>& kernel(int i, int j) const { return combined[static_cast<std::size_t>(i * dim + j)]; }
};

/// Natural Nystrom interpolation at arbitrary points of [0, A]; node values are
/// returned unchanged at the nodes themselves.
ResampledKernels resample(const NystromSolution& sol, const std::vector<double>& grid);

/// n equally spaced points on [0, A] (both ends included).
std::vector<double> uniform_grid(double A, std::size_t n);

struct QSelection {
  int Q = 0;
  double R = 0.0;  // relative L2 change between Q and 2Q
  bool converged = false;
  bool degenerate = false;
  std::vector<std::pair<int, double>> history;  // (Q, R_Q)
};

/// Relative L2 distance between two resampled kernel sets on the same grid, over all (i, j).
double relative_l2_change(const ResampledKernels& a, const ResampledKernels& b);

/// Doubles Q from Q0 until R_Q < threshold or 2Q exceeds the cap.
QSelection select_Q(const std::function<ResampledKernels(int)>& pipeline, int Q0, double threshold = 0.01,
                    int cap = 128);

/// Per-(i,j) CSV of (t, phi) plus one column per bin when marked.
void write_kernel_csv(const std::string& path, const ResampledKernels& k, int i, int j);

}  // namespace hawkes
