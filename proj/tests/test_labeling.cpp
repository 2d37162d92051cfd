// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "scf/labeling.hpp"

namespace scf {
namespace {

double toroidal_distance(std::size_t r, std::size_t c, std::size_t rows, std::size_t cols) {
  const double dr = static_cast<double>(std::min(r, rows - r));
  const double dc = static_cast<double>(std::min(c, cols - c));
  return std::hypot(dr, dc);
}

TEST(ConfidenceMap, PeakIsOneAtOrigin) {
  for (double alpha : {0.01, 0.5, 3.0}) {
    for (double beta : {1.0, 2.0, 3.5}) {
      const ConfidenceMap m = confidence_map(9, 11, alpha, beta);
      EXPECT_EQ(m.values(0, 0), 1.0);
      for (double v : m.values) EXPECT_LE(v, 1.0);
    }
  }
}

TEST(ConfidenceMap, GaussianShapeWithToroidalDistance) {
  const double alpha = 0.3;
  const ConfidenceMap m = confidence_map(8, 10, alpha, 2.0);
  EXPECT_NEAR(m.values(1, 2), std::exp(-alpha * 5.0), 1e-15);
  EXPECT_NEAR(m.values(7, 0), std::exp(-alpha * 1.0), 1e-15);
  EXPECT_NEAR(m.values(4, 5), std::exp(-alpha * 41.0), 1e-15);
}

TEST(ConfidenceMap, RadiallyNonIncreasing) {
  const std::size_t rows = 12;
  const std::size_t cols = 15;
  const ConfidenceMap m = confidence_map(rows, cols, 0.2, 1.5);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    for (std::size_t j = 0; j < m.values.size(); ++j) {
      const double di = toroidal_distance(i / cols, i % cols, rows, cols);
      const double dj = toroidal_distance(j / cols, j % cols, rows, cols);
      if (di < dj) EXPECT_GE(m.values[i], m.values[j]);
    }
  }
}

TEST(ConfidenceMap, AdaptiveAlpha) {
  EXPECT_DOUBLE_EQ(adaptive_alpha(5, 10), 1.0);
  EXPECT_DOUBLE_EQ(adaptive_alpha(10, 20), 0.25);
}

TEST(Labels, KernelThresholdsPartitionTheGrid) {
  const ConfidenceMap m = confidence_map(20, 20, adaptive_alpha(10, 10), 2.0);
  const LabelGrid y = assign_labels(m, 0.5, 0.7);
  EXPECT_EQ(y(0, 0), 1.0);
  EXPECT_EQ(y.positives() + y.negatives() + y.masked(), 400u);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double v = m.values[i];
    const double want = v >= 0.7 ? 1.0 : (v <= 0.5 ? -1.0 : 0.0);
    EXPECT_EQ(y[i], want);
  }
  EXPECT_GT(y.masked(), 0u);
}

TEST(Labels, CenterPositiveForAnyUpperThreshold) {
  const ConfidenceMap m = confidence_map(10, 10, 0.5, 2.0);
  for (double tu : {0.51, 0.9, 0.999}) EXPECT_EQ(assign_labels(m, 0.5, tu)(0, 0), 1.0);
}

TEST(Labels, RejectsBadThresholds) {
  const ConfidenceMap m = confidence_map(10, 10, 0.5, 2.0);
  EXPECT_THROW(assign_labels(m, 0.7, 0.5), ConfigError);
  EXPECT_THROW(assign_labels(m, 0.0, 0.5), ConfigError);
  EXPECT_THROW(assign_labels(m, 0.3, 1.0), ConfigError);
}

TEST(Labels, ValidatesValues) {
  EXPECT_THROW(LabelGrid(RealGrid(2, 2, std::vector<double>{1, -1, 0.5, 0})), ConfigError);
  EXPECT_THROW(LabelGrid(RealGrid(2, 2, std::vector<double>{1, 1, 0, 0})), ConfigError);
  EXPECT_THROW(LabelGrid(RealGrid(2, 2, std::vector<double>{-1, -1, 0, 0})), ConfigError);
  const LabelGrid ok(RealGrid(2, 2, std::vector<double>{1, -1, 0, -1}));
  EXPECT_EQ(ok.positives(), 1u);
  EXPECT_EQ(ok.negatives(), 2u);
  EXPECT_EQ(ok.masked(), 1u);
}

}  // namespace
}  // namespace scf
