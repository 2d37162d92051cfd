// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "scf/oracle.hpp"
#include "scf/spectral.hpp"
#include "test_util.hpp"

namespace scf {
namespace {

using spectral::cross_correlate;
using spectral::dft2;
using spectral::idft2;

TEST(Spectral, ImpulseTransformsToOnes) {
  RealGrid g(4, 4);
  g(0, 0) = 1.0;
  const ComplexGrid G = dft2(g);
  for (const auto& v : G) EXPECT_NEAR(std::abs(v - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(Spectral, ConstantConcentratesAtDc) {
  const RealGrid g(3, 5, 2.5);
  const ComplexGrid G = dft2(g);
  EXPECT_NEAR(G[0].real(), 15 * 2.5, 1e-12);
  for (std::size_t i = 1; i < G.size(); ++i) EXPECT_LT(std::abs(G[i]), 1e-12);
}

TEST(Spectral, TwoPointTransform) {
  const RealGrid g(1, 2, std::vector<double>{3.0, -1.25});
  const ComplexGrid G = dft2(g);
  EXPECT_NEAR(G[0].real(), 1.75, 1e-15);
  EXPECT_NEAR(G[1].real(), 4.25, 1e-15);
  const RealGrid back = idft2(G);
  EXPECT_NEAR(back[0], 3.0, 1e-15);
  EXPECT_NEAR(back[1], -1.25, 1e-15);
}

TEST(Spectral, OnesInvertToImpulse) {
  const RealGrid g = idft2(ComplexGrid(4, 4, Complex(1.0, 0.0)));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], i == 0 ? 1.0 : 0.0, 1e-15);
}

TEST(Spectral, RoundTripRandom) {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const RealGrid g = testing_util::random_grid(8, 8, rng);
    const RealGrid back = idft2(dft2(g));
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(back[i] - g[i]));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Spectral, AsymmetricSpectrumIsRejected) {
  ComplexGrid G(4, 4);
  G(0, 1) = Complex(1.0, 0.0);
  EXPECT_THROW(idft2(G), SymmetryError);
}

TEST(Spectral, ConjugateSymmetryOfRealInput) {
  std::mt19937_64 rng(2);
  const RealGrid g = testing_util::random_grid(5, 6, rng);
  const ComplexGrid G = dft2(g);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      EXPECT_NEAR(std::abs(G(r, c) - std::conj(G((5 - r) % 5, (6 - c) % 6))), 0.0, 1e-12);
    }
  }
}

TEST(Spectral, PairedTransformMatchesSeparateTransforms) {
  std::mt19937_64 rng(3);
  const RealGrid a = testing_util::random_grid(7, 4, rng);
  const RealGrid b = testing_util::random_grid(7, 4, rng);
  const auto [fa, fb] = spectral::dft2_pair(a, b);
  const ComplexGrid ga = dft2(a);
  const ComplexGrid gb = dft2(b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(std::abs(fa[i] - ga[i]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(fb[i] - gb[i]), 0.0, 1e-12);
  }
}

TEST(Spectral, Parseval) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const RealGrid g = testing_util::random_grid(6, 9, rng);
    const double spatial = squared_norm(g);
    const double spectral_energy = squared_norm(dft2(g)) / static_cast<double>(g.size());
    EXPECT_NEAR(spectral_energy / spatial, 1.0, 1e-10);
  }
}

TEST(Spectral, Linearity) {
  std::mt19937_64 rng(5);
  const RealGrid g = testing_util::random_grid(8, 8, rng);
  const RealGrid h = testing_util::random_grid(8, 8, rng);
  const double a = -1.7;
  const ComplexGrid lhs = dft2(a * g + h);
  const ComplexGrid G = dft2(g);
  const ComplexGrid H = dft2(h);
  for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_NEAR(std::abs(lhs[i] - (a * G[i] + H[i])), 0.0, 1e-10);
}

TEST(Spectral, AutocorrelationPeaksAtOrigin) {
  std::mt19937_64 rng(6);
  RealGrid a = testing_util::random_grid(6, 6, rng);
  a *= 1.0 / std::sqrt(squared_norm(a));
  const RealGrid c = cross_correlate(a, a);
  EXPECT_NEAR(c[0], 1.0, 1e-12);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i], c[0]);
}

TEST(Spectral, CorrelationWithImpulseIsIdentity) {
  std::mt19937_64 rng(7);
  RealGrid delta(4, 5);
  delta(0, 0) = 1.0;
  const RealGrid b = testing_util::random_grid(4, 5, rng);
  const RealGrid c = cross_correlate(delta, b);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(c[i], b[i], 1e-12);
}

TEST(Spectral, CorrelationMatchesDirectSum) {
  std::mt19937_64 rng(8);
  const RealGrid a = testing_util::random_grid(5, 7, rng);
  const RealGrid b = testing_util::random_grid(5, 7, rng);
  const RealGrid c = cross_correlate(a, b);
  for (std::size_t u = 0; u < 5; ++u) {
    for (std::size_t v = 0; v < 7; ++v) {
      double direct = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 7; ++j) direct += a(i, j) * b((i + u) % 5, (j + v) % 7);
      }
      EXPECT_NEAR(c(u, v), direct, 1e-10);
    }
  }
}

TEST(Spectral, CorrelationRejectsShapeMismatch) {
  EXPECT_THROW(cross_correlate(RealGrid(2, 3), RealGrid(3, 2)), ShapeError);
}

TEST(Spectral, ConjugateIsAnInvolution) {
  std::mt19937_64 rng(9);
  const ComplexGrid G = dft2(testing_util::random_grid(3, 3, rng));
  EXPECT_EQ(spectral::conj(spectral::conj(G)), G);
}

TEST(Spectral, GuardedDivision) {
  std::mt19937_64 rng(10);
  const ComplexGrid G = dft2(testing_util::random_grid(3, 4, rng));
  const ComplexGrid q = spectral::divide_guarded(G, ComplexGrid(3, 4, Complex(1.0, 0.0)), 1e-12);
  EXPECT_EQ(q, G);
  const ComplexGrid tiny = spectral::divide_guarded(ComplexGrid(1, 1, Complex(1.0, 0.0)),
                                                    ComplexGrid(1, 1, Complex(1e-20, 0.0)), 1e-12);
  EXPECT_LE(std::abs(tiny[0]), 1e12 * (1.0 + 1e-12));
  const ComplexGrid zero = spectral::divide_guarded(ComplexGrid(1, 1, Complex(1.0, 0.0)), ComplexGrid(1, 1), 1e-12);
  EXPECT_TRUE(std::isfinite(zero[0].real()));
  EXPECT_THROW(spectral::divide_guarded(G, G, 0.0), ConfigError);
}

TEST(Spectral, CirculantDiagonalisation) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 5u, 8u}) {
    const RealGrid x = testing_util::random_grid(1, n, rng);
    const RealGrid v = testing_util::random_grid(1, n, rng);
    const oracle::Matrix X = oracle::build_circulant(x);
    const oracle::Vector dense = X * Eigen::Map<const oracle::Vector>(v.data(), static_cast<Eigen::Index>(n));
    const RealGrid fast = idft2(spectral::multiply(spectral::conj(dft2(x)), dft2(v)));
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(dense(static_cast<Eigen::Index>(i)), fast[i], 1e-10);
  }
}

TEST(Spectral, TransformCounter) {
  const auto before = spectral::transform_count();
  (void)dft2(RealGrid(4, 4, 1.0));
  (void)spectral::dft2_pair(RealGrid(4, 4, 1.0), RealGrid(4, 4, 2.0));
  (void)idft2(ComplexGrid(4, 4, Complex(1.0, 0.0)));
  EXPECT_EQ(spectral::transform_count() - before, 3u);
}

}  // namespace
}  // namespace scf
