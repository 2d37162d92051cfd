// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "scf/grid.hpp"

namespace scf {

/// m(p) = gamma * exp(-alpha * |p - p*|^beta) with p* at the grid origin and a
/// toroidal distance, so shift (u, v) and (u - rows, v - cols) are the same sample.
struct ConfidenceMap {
  RealGrid values;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
};

ConfidenceMap confidence_map(std::size_t rows, std::size_t cols, double alpha, double beta);

/// alpha = 50 / (rows * cols) for a target spanning rows x cols samples.
double adaptive_alpha(double target_rows, double target_cols);

/// Ternary labels in {-1, 0, +1}; 0 marks a discarded sample.
class LabelGrid {
 public:
  /// Validates the value set and requires at least one +1 and one -1.
  explicit LabelGrid(RealGrid values);

  const RealGrid& values() const noexcept { return values_; }
  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double operator()(std::size_t r, std::size_t c) const { return values_(r, c); }

  std::size_t positives() const noexcept { return positives_; }
  std::size_t negatives() const noexcept { return negatives_; }
  std::size_t labeled() const noexcept { return positives_ + negatives_; }
  std::size_t masked() const noexcept { return size() - labeled(); }

 private:
  RealGrid values_;
  std::size_t positives_ = 0;
  std::size_t negatives_ = 0;
};

/// +1 where m >= theta_u, -1 where m <= theta_l, 0 in between.
LabelGrid assign_labels(const ConfidenceMap& map, double theta_l, double theta_u);

}  // namespace scf
