// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

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

TEST(Circulant, OneByTwo) {
  const Matrix X = oracle::build_circulant(RealGrid(1, 2, std::vector<double>{3.0, 5.0}));
  Matrix want(2, 2);
  want << 3.0, 5.0, 5.0, 3.0;
  EXPECT_EQ(X, want);
}

TEST(Circulant, ProductIsCrossCorrelation) {
  std::mt19937_64 rng(1);
  const RealGrid x = testing_util::random_grid(4, 6, rng);
  const RealGrid w = testing_util::random_grid(4, 6, rng);
  const Vector a = oracle::build_circulant(x) * flat(w);
  const RealGrid b = spectral::cross_correlate(x, w);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(a(static_cast<Eigen::Index>(i)), b[i], 1e-12);
}

TEST(Circulant, EigenvaluesAreTheSpectrum) {
  std::mt19937_64 rng(2);
  const RealGrid x = testing_util::random_grid(3, 4, rng);
  const Eigen::VectorXcd eig = oracle::build_circulant(x).eigenvalues();
  std::vector<std::complex<double>> got(eig.data(), eig.data() + eig.size());
  const ComplexGrid spectrum = spectral::dft2(x);
  std::vector<std::complex<double>> want(spectrum.begin(), spectrum.end());
  // Match as multisets: greedy nearest pairing.
  for (const auto& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](const auto& a, const auto& b) { return std::abs(a - w) < std::abs(b - w); });
    ASSERT_NE(it, got.end());
    EXPECT_NEAR(std::abs(*it - w), 0.0, 1e-9);
    got.erase(it);
  }
}

TEST(Circulant, StackConcatenatesChannels) {
  std::mt19937_64 rng(3);
  const FeatureStack x = testing_util::random_stack(2, 3, 3, rng);
  const Matrix X = oracle::build_circulant(x);
  EXPECT_EQ(X.rows(), 9);
  EXPECT_EQ(X.cols(), 18);
  EXPECT_EQ(X.leftCols(9), oracle::build_circulant(x[0]));
  EXPECT_EQ(X.rightCols(9), oracle::build_circulant(x[1]));
}

TEST(DenseQP, TwoSampleAnalyticSolution) {
  const double C = 3.0;
  const LabelGrid y(RealGrid(1, 2, std::vector<double>{1.0, -1.0}));
  const auto sol = oracle::solve_dense_qp(oracle::make_problem(RealGrid(1, 2, std::vector<double>{1.0, 0.0}), y, C));
  const double t = C / (1.0 + C);
  EXPECT_NEAR(sol.w(0), t, 1e-10);
  EXPECT_NEAR(sol.w(1), -t, 1e-10);
  EXPECT_NEAR(sol.b, 0.0, 1e-10);
  EXPECT_NEAR(sol.objective, 2.0 * C / (1.0 + C), 1e-10);
}

TEST(DenseQP, VanishingWeightGivesMeanLabelBias) {
  std::mt19937_64 rng(4);
  const LabelGrid y(RealGrid(1, 3, std::vector<double>{1.0, -1.0, -1.0}));
  const auto sol = oracle::solve_dense_qp(oracle::make_problem(testing_util::random_grid(1, 3, rng), y, 1e-9));
  EXPECT_LE(sol.w.lpNorm<Eigen::Infinity>(), 1e-8);
  EXPECT_NEAR(sol.b, -1.0 / 3.0, 1e-8);
}

TEST(DenseQP, OmitsDiscardedSamples) {
  const auto inst = synthetic::random_instance(6, 6, 1, 0.3, 0.7, 1.0, 5);
  const auto p = oracle::make_problem(inst.x, inst.y, 1.0);
  EXPECT_EQ(static_cast<std::size_t>(p.X.rows()), inst.y.positives() + inst.y.negatives());
  for (Eigen::Index i = 0; i < p.y.size(); ++i) EXPECT_EQ(p.y(i), inst.y[p.index[static_cast<std::size_t>(i)]]);
}

TEST(DenseQP, AgreesWithSpectralSolver) {
  const auto inst = synthetic::random_instance(7, 7, 1, 0.3, 0.7, 10.0, 6);
  const auto p = oracle::make_problem(inst.x, inst.y, 10.0);
  const auto dense = oracle::solve_dense_qp(p);
  EXPECT_LE(dense.gradient_norm, 1e-8);
  SolverConfig cfg;
  cfg.C = 10.0;
  cfg.eps = 1e-10;
  cfg.max_iter = 1000000;
  const SupportFilter fast = solve_scf(inst.x[0], inst.y, cfg);
  const Vector w = flat(spectral::idft2(fast.w_hat));
  EXPECT_NEAR(oracle::dense_objective(p, w, fast.bias), dense.objective, 1e-8 * dense.objective);
  EXPECT_NEAR(scf_objective(spectral::dft2(inst.x[0]), fast, inst.y, 10.0),
              oracle::dense_objective(p, dense.w, dense.b), 1e-8 * dense.objective);
}

TEST(RateQuantities, SpectralRadiusIsExactlyOne) {
  for (double C : {1e-3, 1.0, 1e3}) {
    const auto inst = synthetic::full_label_instance(5, 5, C, 7);
    const auto q = oracle::rate_quantities(oracle::make_problem(inst.x, inst.y, C));
    EXPECT_NEAR(q.rho, 1.0, 1e-9) << "C " << C;
    EXPECT_LE(q.rho_sq_root, 1.0 + 1e-9);
    EXPECT_GT(q.min_eig_M, 0.0);
    EXPECT_LE((q.T - q.T.transpose()).lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(RateQuantities, OptimalSlackIsAFixedPoint) {
  const auto inst = synthetic::full_label_instance(6, 6, 1.0, 8);
  const auto p = oracle::make_problem(inst.x, inst.y, 1.0);
  const auto dense = oracle::solve_dense_qp(p);
  const auto q = oracle::rate_quantities(p);
  Vector w_star(dense.w.size() + 1);
  w_star << dense.w, dense.b;
  const Vector e_star = oracle::slack_from_iterate(q, w_star);
  const Vector round_trip = oracle::slack_from_iterate(q, oracle::iterate_from_slack(q, e_star));
  EXPECT_LE((round_trip - e_star).lpNorm<Eigen::Infinity>(), 1e-8);
  EXPECT_LE((oracle::iterate_from_slack(q, e_star) - w_star).lpNorm<Eigen::Infinity>(), 1e-8);

  const auto stay = oracle::verify_qlinear({e_star, e_star}, e_star, {w_star, w_star}, w_star, q);
  EXPECT_TRUE(stay.condition1);
  EXPECT_TRUE(stay.condition3);
}

TEST(RateQuantities, SingleEntryTraceIsVacuous) {
  const auto inst = synthetic::full_label_instance(4, 4, 1.0, 9);
  const auto q = oracle::rate_quantities(oracle::make_problem(inst.x, inst.y, 1.0));
  const Vector e = Vector::Ones(16);
  const Vector w = Vector::Zero(17);
  const auto r = oracle::verify_qlinear({e}, Vector::Zero(16), {w}, Vector::Ones(17), q);
  EXPECT_TRUE(r.slack_ratios.empty());
  EXPECT_TRUE(r.iterate_ratios.empty());
  EXPECT_TRUE(r.condition1);
  EXPECT_TRUE(r.condition3);
}

TEST(KernelMatrix, SymmetricPsdCirculant) {
  std::mt19937_64 rng(10);
  FeatureStack x = testing_util::random_stack(2, 4, 4, rng);
  for (auto& ch : x) ch *= 0.2;
  for (const KernelSpec& spec : {KernelSpec::gaussian(0.3), KernelSpec::polynomial(2), KernelSpec::linear()}) {
    const Matrix K = oracle::explicit_kernel_matrix(x, spec);
    EXPECT_LE((K - K.transpose()).lpNorm<Eigen::Infinity>(), 1e-12);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    const RealGrid k = kernel_correlation(x, x, spec);
    for (std::size_t j = 0; j < k.size(); ++j) EXPECT_NEAR(K(0, static_cast<Eigen::Index>(j)), k[j], 1e-12);
    // Block circulant: K(i, j) depends only on the translation j - i.
    for (std::size_t i = 0; i < 16; ++i) {
      for (std::size_t j = 0; j < 16; ++j) {
        const std::size_t dr = (j / 4 + 4 - i / 4) % 4;
        const std::size_t dc = (j % 4 + 4 - i % 4) % 4;
        EXPECT_NEAR(K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), k(dr, dc), 1e-12);
      }
    }
  }
}

TEST(Mosse, ImpulseSample) {
  std::mt19937_64 rng(11);
  RealGrid delta(4, 4);
  delta[0] = 1.0;
  const ComplexGrid m_hat = spectral::dft2(testing_util::random_grid(4, 4, rng));
  const ComplexGrid w = oracle::mosse_baseline(spectral::dft2(delta), m_hat, 0.5);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(std::abs(w[i] - m_hat[i] / 1.5), 0.0, 1e-14);
}

TEST(Mosse, ZeroRegularisationReproducesTheTarget) {
  std::mt19937_64 rng(12);
  const ComplexGrid x_hat = spectral::dft2(testing_util::random_grid(5, 5, rng));
  const RealGrid m = testing_util::random_grid(5, 5, rng);
  const ComplexGrid w_hat = oracle::mosse_baseline(x_hat, spectral::dft2(m), 0.0);
  const RealGrid f = spectral::idft2(spectral::multiply(x_hat, w_hat));
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(f[i], m[i], 1e-9);
}

TEST(Mosse, MatchesDenseRidge) {
  std::mt19937_64 rng(13);
  const RealGrid x = testing_util::random_grid(4, 5, rng);
  const RealGrid m = testing_util::random_grid(4, 5, rng);
  const double lambda = 0.3;
  const RealGrid w = spectral::idft2(oracle::mosse_baseline(spectral::dft2(x), spectral::dft2(m), lambda));
  const Matrix X = oracle::build_circulant(x);
  const Vector ref = (X * X.transpose() + lambda * Matrix::Identity(20, 20)).ldlt().solve(X * flat(m));
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], ref(static_cast<Eigen::Index>(i)), 1e-8);
  EXPECT_THROW(oracle::mosse_baseline(spectral::dft2(x), spectral::dft2(m), -1.0), ConfigError);
}

TEST(Oracle, SizeGuard) {
  const RealGrid big(65, 64);
  RealGrid labels(65, 64, -1.0);
  labels[0] = 1.0;
  EXPECT_THROW(oracle::make_problem(big, LabelGrid(labels), 1.0), OracleError);
  EXPECT_THROW(oracle::build_circulant(big), OracleError);
}

}  // namespace
}  // namespace scf
