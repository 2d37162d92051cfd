// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "scf/features.hpp"
#include "scf/kscf.hpp"
#include "scf/labeling.hpp"

/// Dense references for small instances. Nothing here calls the spectral
/// solvers; every quantity is built from explicit sample matrices.
namespace scf::oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr std::size_t kMaxSamples = 4096;

/// Row i * cols + j holds x translated by +(i, j), flattened row-major.
Matrix build_circulant(const RealGrid& x);
/// Channel-concatenated variant: row u is [shift_u(x^1), ..., shift_u(x^L)].
Matrix build_circulant(const FeatureStack& x);

/// Explicit SVM problem over the labeled shifts; discarded samples are omitted.
struct DenseProblem {
  Matrix X;
  Vector y;
  double C = 1.0;
  /// Grid position (row-major) of each row of X.
  std::vector<std::size_t> index;
};

DenseProblem make_problem(const FeatureStack& x, const LabelGrid& y, double C);
DenseProblem make_problem(const RealGrid& x, const LabelGrid& y, double C);

struct DenseSolution {
  Vector w;
  double b = 0.0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  std::size_t evaluations = 0;
};

/// ||w||^2 + C * sum max(0, 1 - y_i (x_i . w + b))^2.
double dense_objective(const DenseProblem& p, const Vector& w, double b);

/// Generalised Newton iteration on the active set with Armijo backtracking.
DenseSolution solve_dense_qp(const DenseProblem& p);

/// Kernel problem restricted to the labeled samples.
struct KernelProblem {
  Matrix K;
  Vector y;
  double C = 1.0;
  std::vector<std::size_t> index;
};

KernelProblem make_kernel_problem(const FeatureStack& x, const LabelGrid& y, const KernelSpec& spec, double C);

struct KernelSolution {
  Vector alpha;
  double b = 0.0;
  double objective = 0.0;
};

/// alpha^T K alpha + C * sum max(0, 1 - y_i ((K alpha)_i + b))^2.
double kernel_objective(const KernelProblem& p, const Vector& alpha, double b);

/// Solved in the coordinates of a factor K = Phi Phi^T; alpha = -C * s at the optimum.
KernelSolution solve_dense_kernel_qp(const KernelProblem& p);

/// K_ij = K(shift_i(x), shift_j(x)) by direct evaluation.
Matrix explicit_kernel_matrix(const FeatureStack& x, const KernelSpec& spec);

/// U = X~ Diag(y) with X~ = [X^T; 1^T], M = I~ + C U U^T, T = C U^T M^-1 U.
struct RateQuantities {
  Matrix U;
  Matrix M;
  Matrix T;
  double C = 1.0;
  /// Spectral radius of T and sqrt(rho(T^2)).
  double rho = 0.0;
  double rho_sq_root = 0.0;
  double min_eig_M = 0.0;
};

RateQuantities rate_quantities(const DenseProblem& p);

/// w~ = C M^-1 U (1 + e).
Vector iterate_from_slack(const RateQuantities& q, const Vector& e);
/// e = max(U^T w~ - 1, 0).
Vector slack_from_iterate(const RateQuantities& q, const Vector& w_tilde);

struct QLinearReport {
  std::vector<double> slack_ratios;
  std::vector<double> iterate_ratios;
  double slack_bound = 0.0;
  double iterate_bound = 0.0;
  /// Largest violation of each condition beyond the additive slack (<= 0 means it holds).
  double worst_slack_excess = 0.0;
  double worst_iterate_excess = 0.0;
  bool condition1 = true;
  bool condition3 = true;
};

/// Checks |e^{k+1} - e*| <= sqrt(rho(T^2)) |e^k - e*| + slack and
/// |w~^{k+1} - w~*|_M <= sqrt(rho(T)) |w~^k - w~*|_M + slack over a trace.
QLinearReport verify_qlinear(const std::vector<Vector>& slack_trace, const Vector& e_star,
                             const std::vector<Vector>& iterate_trace, const Vector& w_star,
                             const RateQuantities& q, double slack = 1e-8);

/// Ridge filter of the squared-error baseline: conj(x_hat) m_hat / (|x_hat|^2 + lambda).
ComplexGrid mosse_baseline(const ComplexGrid& x_hat, const ComplexGrid& m_hat, double lambda,
                           double floor = 1e-12);

}  // namespace scf::oracle
