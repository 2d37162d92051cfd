// SPDX-License-Identifier: Apache-2.0
#include "scf/oracle.hpp"

#include <cmath>

#include "scf/spectral.hpp"

namespace scf::oracle {
namespace {

void guard(std::size_t samples) {
  if (samples > kMaxSamples) {
    throw OracleError("oracle size guard: " + std::to_string(samples) + " samples exceed " +
                      std::to_string(kMaxSamples));
  }
}

FeatureStack shifted(const FeatureStack& x, std::size_t u) {
  const auto dr = static_cast<long>(u / x.cols());
  const auto dc = static_cast<long>(u % x.cols());
  std::vector<RealGrid> out;
  out.reserve(x.channels());
  for (const auto& ch : x) out.push_back(circshift(ch, dr, dc));
  return FeatureStack(std::move(out));
}

struct Evaluation {
  double objective;
  Vector gradient;
  std::vector<Eigen::Index> active;
};

// theta = [w; b]; returns objective, gradient and the violated set.
Evaluation evaluate(const DenseProblem& p, const Vector& theta) {
  const Eigen::Index d = p.X.cols();
  const Vector f = p.X * theta.head(d) + Vector::Constant(p.X.rows(), theta(d));
  Vector viol(p.X.rows());
  Evaluation ev{theta.head(d).squaredNorm(), Vector::Zero(d + 1), {}};
  for (Eigen::Index i = 0; i < viol.size(); ++i) {
    viol(i) = std::max(0.0, 1.0 - p.y(i) * f(i));
    if (viol(i) > 0.0) ev.active.push_back(i);
  }
  ev.objective += p.C * viol.squaredNorm();
  const Vector weighted = p.y.cwiseProduct(viol);
  ev.gradient.head(d) = 2.0 * theta.head(d) - 2.0 * p.C * (p.X.transpose() * weighted);
  ev.gradient(d) = -2.0 * p.C * weighted.sum();
  return ev;
}

}  // namespace

Matrix build_circulant(const RealGrid& x) { return build_circulant(FeatureStack({x})); }

Matrix build_circulant(const FeatureStack& x) {
  const std::size_t n = x.rows() * x.cols();
  guard(n);
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n * x.channels()));
  for (std::size_t u = 0; u < n; ++u) {
    const FeatureStack s = shifted(x, u);
    for (std::size_t l = 0; l < x.channels(); ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        X(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(l * n + i)) = s[l][i];
      }
    }
  }
  return X;
}

DenseProblem make_problem(const FeatureStack& x, const LabelGrid& y, double C) {
  if (!(C > 0.0)) throw OracleError("dense problem needs C > 0");
  require_same_shape(x[0], y.values(), "make_problem");
  const Matrix full = build_circulant(x);
  DenseProblem p;
  p.C = C;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0) p.index.push_back(i);
  }
  p.X.resize(static_cast<Eigen::Index>(p.index.size()), full.cols());
  p.y.resize(static_cast<Eigen::Index>(p.index.size()));
  for (std::size_t r = 0; r < p.index.size(); ++r) {
    p.X.row(static_cast<Eigen::Index>(r)) = full.row(static_cast<Eigen::Index>(p.index[r]));
    p.y(static_cast<Eigen::Index>(r)) = y[p.index[r]];
  }
  return p;
}

DenseProblem make_problem(const RealGrid& x, const LabelGrid& y, double C) {
  return make_problem(FeatureStack({x}), y, C);
}

double dense_objective(const DenseProblem& p, const Vector& w, double b) {
  Vector theta(w.size() + 1);
  theta << w, b;
  return evaluate(p, theta).objective;
}

DenseSolution solve_dense_qp(const DenseProblem& p) {
  constexpr double kGradTol = 1e-8;
  constexpr std::size_t kMaxEvaluations = 1'000'000;
  constexpr std::size_t kMaxNewton = 500;
  const Eigen::Index d = p.X.cols();
  const Eigen::Index n = p.X.rows();
  if (n == 0) throw OracleError("dense problem has no samples");

  Vector theta = Vector::Zero(d + 1);
  Evaluation ev = evaluate(p, theta);
  std::size_t evaluations = 1;
  // Tolerance relative to the starting gradient.
  const double tol = kGradTol * std::min(1.0, ev.gradient.norm());

  for (std::size_t it = 0; it < kMaxNewton; ++it) {
    if (ev.gradient.norm() <= tol) break;

    Matrix H = Matrix::Zero(d + 1, d + 1);
    H.topLeftCorner(d, d).diagonal().setConstant(2.0);
    Matrix xa(static_cast<Eigen::Index>(ev.active.size()), d + 1);
    for (std::size_t r = 0; r < ev.active.size(); ++r) {
      xa.row(static_cast<Eigen::Index>(r)) << p.X.row(ev.active[r]), 1.0;
    }
    H.noalias() += 2.0 * p.C * xa.transpose() * xa;
    H(d, d) += 1e-12 * (1.0 + H(d, d));
    const Vector step = -H.ldlt().solve(ev.gradient);
    const double slope = ev.gradient.dot(step);
    if (!(slope < 0.0)) break;

    double t = 1.0;
    Evaluation trial = evaluate(p, theta + t * step);
    ++evaluations;
    while (trial.objective > ev.objective + 1e-4 * t * slope && t > 1e-20) {
      t *= 0.5;
      trial = evaluate(p, theta + t * step);
      if (++evaluations > kMaxEvaluations) throw OracleError("solve_dense_qp: evaluation cap exceeded");
    }
    // At the optimum round-off stops the objective from decreasing.
    if (!(trial.objective < ev.objective) && trial.gradient.norm() >= ev.gradient.norm()) break;
    theta += t * step;
    ev = std::move(trial);
  }

  DenseSolution sol;
  sol.w = theta.head(d);
  sol.b = theta(d);
  sol.objective = ev.objective;
  sol.gradient_norm = ev.gradient.norm();
  sol.evaluations = evaluations;
  const double scale = 1.0 + p.C * (p.X.cwiseAbs().sum() / static_cast<double>(n)) * (1.0 + sol.w.cwiseAbs().maxCoeff());
  if (sol.gradient_norm > std::max(kGradTol, 1e-12 * scale)) {
    throw OracleError("solve_dense_qp: no convergence (gradient norm " + std::to_string(sol.gradient_norm) + ", scale " + std::to_string(scale) + ", evaluations " + std::to_string(evaluations) + ")");
  }
  return sol;
}

Matrix explicit_kernel_matrix(const FeatureStack& x, const KernelSpec& spec) {
  const std::size_t n = x.rows() * x.cols();
  guard(n);
  std::vector<FeatureStack> shifts;
  shifts.reserve(n);
  for (std::size_t u = 0; u < n; ++u) shifts.push_back(shifted(x, u));
  Matrix K(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kernel_value(shifts[i], shifts[j], spec);
    }
  }
  return K;
}

KernelProblem make_kernel_problem(const FeatureStack& x, const LabelGrid& y, const KernelSpec& spec, double C) {
  if (!(C > 0.0)) throw OracleError("kernel problem needs C > 0");
  require_same_shape(x[0], y.values(), "make_kernel_problem");
  const Matrix full = explicit_kernel_matrix(x, spec);
  KernelProblem p;
  p.C = C;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0) p.index.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(p.index.size());
  p.K.resize(m, m);
  p.y.resize(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    p.y(r) = y[p.index[static_cast<std::size_t>(r)]];
    for (Eigen::Index c = 0; c < m; ++c) {
      p.K(r, c) = full(static_cast<Eigen::Index>(p.index[static_cast<std::size_t>(r)]),
                       static_cast<Eigen::Index>(p.index[static_cast<std::size_t>(c)]));
    }
  }
  return p;
}

double kernel_objective(const KernelProblem& p, const Vector& alpha, double b) {
  const Vector f = p.K * alpha + Vector::Constant(alpha.size(), b);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double v = std::max(0.0, 1.0 - p.y(i) * f(i));
    loss += v * v;
  }
  return alpha.dot(p.K * alpha) + p.C * loss;
}

KernelSolution solve_dense_kernel_qp(const KernelProblem& p) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (p.K + p.K.transpose()));
  if (eig.info() != Eigen::Success) throw OracleError("kernel eigendecomposition failed");
  const Vector lambda = eig.eigenvalues().cwiseMax(0.0);
  DenseProblem primal;
  primal.X = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  primal.y = p.y;
  primal.C = p.C;
  const DenseSolution sol = solve_dense_qp(primal);

  const Vector f = primal.X * sol.w + Vector::Constant(p.y.size(), sol.b);
  KernelSolution out;
  out.b = sol.b;
  out.alpha = Vector::Zero(p.y.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (p.y(i) * f(i) < 1.0) out.alpha(i) = -p.C * (f(i) - p.y(i));
  }
  out.objective = sol.objective;
  return out;
}

RateQuantities rate_quantities(const DenseProblem& p) {
  const Eigen::Index d = p.X.cols();
  const Eigen::Index n = p.X.rows();
  guard(static_cast<std::size_t>(n));
  RateQuantities q;
  q.C = p.C;
  Matrix x_tilde(d + 1, n);
  x_tilde.topRows(d) = p.X.transpose();
  x_tilde.row(d).setOnes();
  q.U = x_tilde * p.y.asDiagonal();
  Matrix I_tilde = Matrix::Identity(d + 1, d + 1);
  I_tilde(d, d) = 0.0;
  q.M = I_tilde + p.C * q.U * q.U.transpose();
  const Eigen::SelfAdjointEigenSolver<Matrix> m_eig(q.M, Eigen::EigenvaluesOnly);
  q.min_eig_M = m_eig.eigenvalues().minCoeff();
  if (!(q.min_eig_M > 0.0)) throw OracleError("rate quantities: M is not positive definite");
  const Eigen::LDLT<Matrix> m_solve(q.M);
  q.T = p.C * q.U.transpose() * m_solve.solve(q.U);
  q.T = 0.5 * (q.T + q.T.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> t_eig(q.T, Eigen::EigenvaluesOnly);
  q.rho = t_eig.eigenvalues().cwiseAbs().maxCoeff();
  q.rho_sq_root = std::sqrt(t_eig.eigenvalues().cwiseAbs2().maxCoeff());
  return q;
}

Vector iterate_from_slack(const RateQuantities& q, const Vector& e) {
  return q.C * q.M.ldlt().solve(q.U * (Vector::Ones(e.size()) + e));
}

Vector slack_from_iterate(const RateQuantities& q, const Vector& w_tilde) {
  return (q.U.transpose() * w_tilde - Vector::Ones(q.U.cols())).cwiseMax(0.0);
}

QLinearReport verify_qlinear(const std::vector<Vector>& slack_trace, const Vector& e_star,
                             const std::vector<Vector>& iterate_trace, const Vector& w_star,
                             const RateQuantities& q, double slack) {
  QLinearReport r;
  r.slack_bound = q.rho_sq_root;
  r.iterate_bound = std::sqrt(q.rho);
  r.worst_slack_excess = -std::numeric_limits<double>::infinity();
  r.worst_iterate_excess = -std::numeric_limits<double>::infinity();
  for (const auto& e : slack_trace) {
    if (e.size() != e_star.size()) throw OracleError("verify_qlinear: slack trace does not match the instance");
  }
  for (const auto& w : iterate_trace) {
    if (w.size() != w_star.size() || w.size() != q.M.rows()) {
      throw OracleError("verify_qlinear: iterate trace does not match the instance");
    }
  }
  auto m_norm = [&](const Vector& v) { return std::sqrt(std::max(0.0, v.dot(q.M * v))); };
  for (std::size_t k = 0; k + 1 < slack_trace.size(); ++k) {
    const double prev = (slack_trace[k] - e_star).norm();
    const double next = (slack_trace[k + 1] - e_star).norm();
    r.slack_ratios.push_back(prev > 0.0 ? next / prev : 0.0);
    r.worst_slack_excess = std::max(r.worst_slack_excess, next - (r.slack_bound * prev + slack));
  }
  for (std::size_t k = 0; k + 1 < iterate_trace.size(); ++k) {
    const double prev = m_norm(iterate_trace[k] - w_star);
    const double next = m_norm(iterate_trace[k + 1] - w_star);
    r.iterate_ratios.push_back(prev > 0.0 ? next / prev : 0.0);
    r.worst_iterate_excess = std::max(r.worst_iterate_excess, next - (r.iterate_bound * prev + slack));
  }
  if (r.slack_ratios.empty()) r.worst_slack_excess = 0.0;
  if (r.iterate_ratios.empty()) r.worst_iterate_excess = 0.0;
  r.condition1 = r.worst_slack_excess <= 0.0;
  r.condition3 = r.worst_iterate_excess <= 0.0;
  return r;
}

ComplexGrid mosse_baseline(const ComplexGrid& x_hat, const ComplexGrid& m_hat, double lambda, double floor) {
  require_same_shape(x_hat, m_hat, "mosse_baseline");
  if (lambda < 0.0) throw ConfigError("mosse_baseline: lambda must be non-negative");
  ComplexGrid num(x_hat.rows(), x_hat.cols());
  ComplexGrid den(x_hat.rows(), x_hat.cols());
  for (std::size_t i = 0; i < num.size(); ++i) {
    num[i] = std::conj(x_hat[i]) * m_hat[i];
    den[i] = std::norm(x_hat[i]) + lambda;
  }
  return spectral::divide_guarded(num, den, floor);
}

}  // namespace scf::oracle
