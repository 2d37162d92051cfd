// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "scf/labeling.hpp"
#include "scf/oracle.hpp"
#include "scf/scf_core.hpp"
#include "scf/spectral.hpp"
#include "scf/synthetic.hpp"
#include "test_util.hpp"

namespace scf {
namespace {

using oracle::Matrix;
using oracle::Vector;

Vector flat(const RealGrid& g) {
  Vector v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v(static_cast<Eigen::Index>(i)) = g[i];
  return v;
}

RealGrid grid_from(const Vector& v, std::size_t rows, std::size_t cols) {
  RealGrid g(rows, cols);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = v(static_cast<Eigen::Index>(i));
  return g;
}

LabelGrid standard_labels(std::size_t rows, std::size_t cols, double tl = 0.3, double tu = 0.7) {
  return assign_labels(confidence_map(rows, cols, 0.5, 2.0), tl, tu);
}

SolverConfig tight(double C) {
  SolverConfig cfg;
  cfg.C = C;
  cfg.eps = 1e-9;
  cfg.max_iter = 1000000;
  return cfg;
}

TEST(MarginDeficit, ZeroFilterGivesMinusOneOnLabeled) {
  const LabelGrid y = standard_labels(6, 6);
  std::mt19937_64 rng(1);
  const ComplexGrid x_hat = spectral::dft2(testing_util::random_grid(6, 6, rng));
  const SupportFilter zero{ComplexGrid(6, 6), 0.0, {}};
  const RealGrid d = margin_deficit(x_hat, zero, y);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], y[i] == 0.0 ? 0.0 : -1.0);
}

TEST(MarginDeficit, UnitMarginClassifierGivesZero) {
  const LabelGrid y = standard_labels(5, 5);
  RealGrid delta(5, 5);
  delta[0] = 1.0;
  // With an impulse base sample the response is w itself.
  const SupportFilter filter{spectral::dft2(y.values()), 0.0, {}};
  const RealGrid d = margin_deficit(spectral::dft2(delta), filter, y);
  for (double v : d) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(MarginDeficit, MatchesExplicitShifts) {
  std::mt19937_64 rng(2);
  const RealGrid x = testing_util::random_grid(6, 7, rng);
  const RealGrid w = testing_util::random_grid(6, 7, rng);
  const LabelGrid y = standard_labels(6, 7);
  const double b = 0.3;
  const SupportFilter filter{spectral::dft2(w), b, {}};
  const RealGrid d = margin_deficit(spectral::dft2(x), filter, y);
  const Vector f = oracle::build_circulant(x) * flat(w);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double want = y[i] == 0.0 ? 0.0 : y[i] * (f(static_cast<Eigen::Index>(i)) + b) - 1.0;
    EXPECT_NEAR(d[i], want, 1e-8);
  }
}

TEST(Slack, ProjectsOntoNonnegatives) {
  const RealGrid e = update_slack(RealGrid(1, 2, std::vector<double>{-1.0, 2.0}));
  EXPECT_EQ(e[0], 0.0);
  EXPECT_EQ(e[1], 2.0);
  const RealGrid pos(2, 3, std::vector<double>{0.0, 1.0, 2.5, 0.1, 7.0, 3.0});
  EXPECT_EQ(update_slack(pos), pos);
}

TEST(Slack, MinimisesDistanceByGridSearch) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const RealGrid d = testing_util::random_grid(1, 3, rng);
    const RealGrid e = update_slack(d);
    for (std::size_t i = 0; i < 3; ++i) {
      double best = std::numeric_limits<double>::infinity();
      double arg = 0.0;
      for (int k = 0; k <= 40000; ++k) {
        const double cand = k * 1e-4;
        const double cost = (cand - d[i]) * (cand - d[i]);
        if (cost < best) {
          best = cost;
          arg = cand;
        }
      }
      EXPECT_NEAR(e[i], arg, 1e-4);
    }
  }
}

TEST(Bias, MeanOfTarget) {
  EXPECT_DOUBLE_EQ(update_bias(RealGrid(1, 2, std::vector<double>{1.0, 3.0})), 2.0);
  const LabelGrid y(RealGrid(2, 2, std::vector<double>{1, -1, -1, 1}));
  const RealGrid q = imputed_target(y, RealGrid(2, 2), RealGrid(2, 2));
  EXPECT_DOUBLE_EQ(update_bias(q), 0.0);
}

TEST(Bias, EqualsJointRidgeOptimum) {
  // Masked samples carry the current response; the bias of the exact joint
  // minimiser of ||X w + b - q||^2 + ||w||^2 / C is compared with update_bias.
  std::mt19937_64 rng(4);
  const std::size_t rows = 6;
  const std::size_t cols = 6;
  const RealGrid x = testing_util::random_grid(rows, cols, rng);
  const LabelGrid y = standard_labels(rows, cols);
  const RealGrid f = testing_util::random_grid(rows, cols, rng);
  RealGrid e = testing_util::random_grid(rows, cols, rng);
  for (auto& v : e) v = std::max(v, 0.0);
  const RealGrid q = imputed_target(y, e, f);
  const double C = 3.0;

  const Matrix X = oracle::build_circulant(x);
  const Eigen::Index n = X.rows();
  Matrix A(n, n + 1);
  A << X, Vector::Ones(n);
  Matrix H = A.transpose() * A;
  H.topLeftCorner(n, n) += Matrix::Identity(n, n) / C;
  const Vector sol = H.ldlt().solve(A.transpose() * flat(q));
  EXPECT_NEAR(update_bias(q), sol(n), 1e-8);
}

TEST(FilterUpdate, ImpulseSample) {
  std::mt19937_64 rng(5);
  RealGrid delta(4, 4);
  delta[0] = 1.0;
  const ComplexGrid x_hat = spectral::dft2(delta);
  const ComplexGrid p_hat = spectral::dft2(testing_util::random_grid(4, 4, rng));
  const double C = 2.0;
  const ComplexGrid w = update_filter(x_hat, p_hat, C);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(std::abs(w[i] - p_hat[i] / (1.0 + 1.0 / C)), 0.0, 1e-14);
  const ComplexGrid w_inf = update_filter(x_hat, p_hat, 1e15);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(std::abs(w_inf[i] - p_hat[i]), 0.0, 1e-12);
}

TEST(FilterUpdate, MatchesDenseRidge) {
  std::mt19937_64 rng(6);
  const RealGrid x = testing_util::random_grid(6, 6, rng);
  const RealGrid p = testing_util::random_grid(6, 6, rng);
  const double C = 0.7;
  const RealGrid w = spectral::idft2(update_filter(spectral::dft2(x), spectral::dft2(p), C));
  const Matrix X = oracle::build_circulant(x);
  const Matrix H = X.transpose() * X + Matrix::Identity(36, 36) / C;
  const Vector ref = H.ldlt().solve(X.transpose() * flat(p));
  for (std::size_t i = 0; i < 36; ++i) EXPECT_NEAR(w[i], ref(static_cast<Eigen::Index>(i)), 1e-6);
}

TEST(FilterUpdate, ConjugatedNumeratorDiffers) {
  std::mt19937_64 rng(7);
  const ComplexGrid x_hat = spectral::dft2(testing_util::random_grid(5, 5, rng));
  const ComplexGrid p_hat = spectral::dft2(testing_util::random_grid(5, 5, rng));
  const ComplexGrid a = update_filter(x_hat, p_hat, 1.0);
  const ComplexGrid b = update_filter(x_hat, p_hat, 1.0, 1e-12, true);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  EXPECT_GT(diff, 1e-3);
}

TEST(Residuals, SmallAtDenseOptimum) {
  const auto inst = synthetic::random_instance(6, 6, 1, 0.3, 0.7, 10.0, 11);
  const auto sol = oracle::solve_dense_qp(oracle::make_problem(inst.x, inst.y, inst.C));
  const SupportFilter filter{spectral::dft2(grid_from(sol.w, 6, 6)), sol.b, {}};
  const ComplexGrid x_hat = spectral::dft2(inst.x[0]);
  const RealGrid e = update_slack(margin_deficit(x_hat, filter, inst.y));
  EXPECT_LE(residuals(x_hat, filter, inst.y, e, inst.C).max(), 1e-6);
}

TEST(Residuals, ZeroStartIsNotConverged) {
  const auto inst = synthetic::random_instance(5, 5, 1, 0.3, 0.7, 1.0, 12);
  const SupportFilter zero{ComplexGrid(5, 5), 0.0, {}};
  const Residuals r = residuals(spectral::dft2(inst.x[0]), zero, inst.y, RealGrid(5, 5), 1.0);
  EXPECT_EQ(r.r3_max, -1.0);
  EXPECT_GT(r.r1_bias + r.r1_inf, 0.0);
}

TEST(Residuals, MaskingAnInactiveSampleChangesNothing) {
  const auto inst = synthetic::random_instance(6, 6, 1, 0.3, 0.7, 1.0, 13);
  const SupportFilter filter = solve_scf(inst.x[0], inst.y, tight(1.0));
  const ComplexGrid x_hat = spectral::dft2(inst.x[0]);
  const RealGrid f = response(x_hat, filter);
  RealGrid values = inst.y.values();
  std::size_t inactive = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == -1.0 && values[i] * f[i] > 1.0 + 1e-6) inactive = i;
  }
  ASSERT_LT(inactive, values.size());
  values[inactive] = 0.0;
  const LabelGrid masked(values);
  const Residuals a = residuals(x_hat, filter, inst.y, update_slack(margin_deficit(x_hat, filter, inst.y)), 1.0);
  const Residuals b = residuals(x_hat, filter, masked, update_slack(margin_deficit(x_hat, filter, masked)), 1.0);
  EXPECT_NEAR(a.r1_inf, b.r1_inf, 1e-15);
  EXPECT_NEAR(a.r1_bias, b.r1_bias, 1e-15);
}

TEST(Solver, SeparableBlobClassifiesEveryLabeledShift) {
  RealGrid x(10, 10);
  x(0, 0) = x(0, 1) = x(1, 0) = x(1, 1) = 1.0;
  const LabelGrid y = assign_labels(confidence_map(10, 10, 0.5, 2.0), 0.3, 0.7);
  const SupportFilter filter = solve_scf(x, y, tight(1e4));
  const RealGrid f = response(spectral::dft2(x), filter);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (y[i] != 0.0) EXPECT_GT(y[i] * f[i], 0.0) << "shift " << i;
  }
}

TEST(Solver, InfiniteToleranceStopsAfterOneIteration) {
  const auto inst = synthetic::random_instance(6, 6, 1, 0.3, 0.7, 1.0, 14);
  SolverConfig cfg;
  cfg.eps = std::numeric_limits<double>::infinity();
  const SupportFilter f = solve_scf(inst.x[0], inst.y, cfg);
  EXPECT_EQ(f.report.iterations, 1u);
  EXPECT_TRUE(f.report.converged);
}

TEST(Solver, MatchesDenseObjective) {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const double C = seed % 2 == 0 ? 1.0 : 1e4;
    const auto inst = synthetic::random_instance(8, 8, 1, 0.3, 0.7, C, seed);
    const SupportFilter f = solve_scf(inst.x[0], inst.y, tight(C));
    const auto dense = oracle::solve_dense_qp(oracle::make_problem(inst.x, inst.y, C));
    const double obj = scf_objective(spectral::dft2(inst.x[0]), f, inst.y, C);
    EXPECT_NEAR(obj, dense.objective, 1e-6 * dense.objective) << "seed " << seed;
  }
}

TEST(Solver, SpatialFilterIsReal) {
  const auto inst = synthetic::random_instance(7, 9, 1, 0.3, 0.7, 100.0, 30);
  const SupportFilter f = solve_scf(inst.x[0], inst.y, tight(100.0));
  EXPECT_NO_THROW(spectral::idft2(f.w_hat));
  EXPECT_TRUE(std::isfinite(f.bias));
}

TEST(Solver, WarmStartFromOptimumConvergesImmediately) {
  const auto inst = synthetic::random_instance(6, 6, 1, 0.3, 0.7, 1.0, 31);
  const SupportFilter cold = solve_scf(inst.x[0], inst.y, tight(1.0));
  const SupportFilter warm = solve_scf(inst.x[0], inst.y, tight(1.0), &cold);
  EXPECT_LE(warm.report.iterations, 2u);
  EXPECT_TRUE(warm.report.converged);
}

TEST(Solver, TraceObjectiveNonIncreasingWithoutAcceleration) {
  const auto inst = synthetic::random_instance(6, 6, 1, 0.3, 0.7, 1.0, 32);
  SolverConfig cfg = tight(1.0);
  cfg.anderson = 0;
  SolveTrace trace;
  (void)solve_scf(inst.x[0], inst.y, cfg, nullptr, &trace);
  ASSERT_GT(trace.objective.size(), 2u);
  for (std::size_t k = 1; k < trace.objective.size(); ++k) {
    EXPECT_LE(trace.objective[k], trace.objective[k - 1] * (1.0 + 1e-12) + 1e-12);
  }
}

TEST(Solver, TwoTransformsPerIteration) {
  const auto inst = synthetic::random_instance(16, 16, 1, 0.3, 0.7, 1e4, 33);
  SolverConfig cfg;
  cfg.eps = 1e-300;
  auto count = [&](std::size_t iters) {
    cfg.max_iter = iters;
    const auto before = spectral::transform_count();
    (void)solve_scf(inst.x[0], inst.y, cfg);
    return spectral::transform_count() - before;
  };
  EXPECT_EQ(count(11) - count(10), 2u);
  EXPECT_EQ(count(40) - count(20), 40u);
}

TEST(Solver, RejectsInvalidConfig) {
  const auto inst = synthetic::random_instance(4, 4, 1, 0.3, 0.7, 1.0, 34);
  SolverConfig cfg;
  cfg.C = -1.0;
  EXPECT_THROW(solve_scf(inst.x[0], inst.y, cfg), ConfigError);
  cfg = SolverConfig{};
  cfg.eps = 0.0;
  EXPECT_THROW(solve_scf(inst.x[0], inst.y, cfg), ConfigError);
  cfg = SolverConfig{};
  cfg.max_iter = 0;
  EXPECT_THROW(solve_scf(inst.x[0], inst.y, cfg), ConfigError);
  EXPECT_THROW(solve_scf(RealGrid(5, 5), inst.y, SolverConfig{}), ShapeError);
}

}  // namespace
}  // namespace scf
