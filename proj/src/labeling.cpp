// SPDX-License-Identifier: Apache-2.0
#include "scf/labeling.hpp"

#include <cmath>

namespace scf {

ConfidenceMap confidence_map(std::size_t rows, std::size_t cols, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ConfigError("confidence_map: alpha and beta must be positive");
  ConfidenceMap map{RealGrid(rows, cols), alpha, beta, 1.0};
  for (std::size_t r = 0; r < rows; ++r) {
    const double dr = static_cast<double>(std::min(r, rows - r));
    for (std::size_t c = 0; c < cols; ++c) {
      const double dc = static_cast<double>(std::min(c, cols - c));
      const double dist = std::sqrt(dr * dr + dc * dc);
      map.values(r, c) = map.gamma * std::exp(-alpha * std::pow(dist, beta));
    }
  }
  return map;
}

double adaptive_alpha(double target_rows, double target_cols) {
  if (!(target_rows > 0.0) || !(target_cols > 0.0)) throw ConfigError("adaptive_alpha: empty target");
  return 50.0 / (target_rows * target_cols);
}

LabelGrid::LabelGrid(RealGrid values) : values_(std::move(values)) {
  for (double v : values_) {
    if (v == 1.0) {
      ++positives_;
    } else if (v == -1.0) {
      ++negatives_;
    } else if (v != 0.0) {
      throw ConfigError("labels must be -1, 0 or +1");
    }
  }
  if (positives_ == 0) throw ConfigError("label grid has no positive samples");
  if (negatives_ == 0) throw ConfigError("label grid has no negative samples");
}

LabelGrid assign_labels(const ConfidenceMap& map, double theta_l, double theta_u) {
  if (!(theta_l > 0.0 && theta_l < theta_u && theta_u < 1.0)) {
    throw ConfigError("assign_labels: need 0 < theta_l < theta_u < 1");
  }
  RealGrid y(map.values.rows(), map.values.cols());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double m = map.values[i];
    y[i] = m >= theta_u ? 1.0 : (m <= theta_l ? -1.0 : 0.0);
  }
  return LabelGrid(std::move(y));
}

}  // namespace scf
