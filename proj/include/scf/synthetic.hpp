// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "scf/features.hpp"
#include "scf/labeling.hpp"

namespace scf::synthetic {

/// Seeded random labelled instance: standard normal channels and labels from
/// a confidence map with the given alpha (beta = 2).
struct Instance {
  FeatureStack x;
  LabelGrid y;
  double C;
  std::uint64_t seed;
};

Instance random_instance(std::size_t rows, std::size_t cols, std::size_t channels, double theta_l,
                         double theta_u, double C, std::uint64_t seed, double alpha = 0.5);

/// Instance without discarded samples: +1 where the confidence map is >= 0.5.
Instance full_label_instance(std::size_t rows, std::size_t cols, double C, std::uint64_t seed,
                             double alpha = 0.5);

/// Human-readable dump used to replay a failing instance.
std::string describe(const Instance& inst);

/// Smooth random texture in [0, 255] (sum of a few random sinusoids), gray or RGB.
Image texture(std::size_t rows, std::size_t cols, std::size_t channels, std::uint64_t seed);

/// Image shifted cyclically by +(dr, dc).
Image cyclic_shift(const Image& image, long dr, long dc);

/// Image repeated k times along each axis.
Image tile(const Image& image, std::size_t k);

/// Image resampled about its centre by `zoom` (> 1 enlarges content), borders replicated.
Image zoom_about_center(const Image& image, double zoom);

}  // namespace scf::synthetic
