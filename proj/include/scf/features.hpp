// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "scf/grid.hpp"

namespace scf {

/// 8-bit-range image stored as interleaved floats in [0, 255]. One channel is
/// grayscale, three channels are RGB.
struct Image {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t channels = 1;
  std::vector<float> pixels;

  Image() = default;
  Image(std::size_t r, std::size_t c, std::size_t ch, float fill = 0.0F)
      : rows(r), cols(c), channels(ch), pixels(r * c * ch, fill) {}

  bool empty() const noexcept { return pixels.empty(); }
  float& at(std::size_t r, std::size_t c, std::size_t ch = 0) {
    return pixels[(r * cols + c) * channels + ch];
  }
  float at(std::size_t r, std::size_t c, std::size_t ch = 0) const {
    return pixels[(r * cols + c) * channels + ch];
  }
  bool operator==(const Image&) const = default;
};

/// Luma (Rec. 601) for RGB input; copies grayscale input.
Image to_gray(const Image& image);

/// Multi-channel feature map; every channel shares one shape.
class FeatureStack {
 public:
  FeatureStack() = default;
  explicit FeatureStack(std::vector<RealGrid> channels);
  FeatureStack(std::size_t count, std::size_t rows, std::size_t cols);

  std::size_t channels() const noexcept { return channels_.size(); }
  std::size_t rows() const noexcept { return channels_.empty() ? 0 : channels_.front().rows(); }
  std::size_t cols() const noexcept { return channels_.empty() ? 0 : channels_.front().cols(); }
  /// Total element count across channels.
  std::size_t element_count() const noexcept { return channels() * rows() * cols(); }

  RealGrid& operator[](std::size_t l) { return channels_[l]; }
  const RealGrid& operator[](std::size_t l) const { return channels_[l]; }
  auto begin() noexcept { return channels_.begin(); }
  auto end() noexcept { return channels_.end(); }
  auto begin() const noexcept { return channels_.begin(); }
  auto end() const noexcept { return channels_.end(); }

  bool same_layout(const FeatureStack& o) const noexcept {
    return channels() == o.channels() && rows() == o.rows() && cols() == o.cols();
  }
  bool operator==(const FeatureStack&) const = default;

 private:
  std::vector<RealGrid> channels_;
};

/// Channels of `a` followed by channels of `b`.
FeatureStack concat(const FeatureStack& a, const FeatureStack& b);

/// Mean over non-overlapping cell x cell blocks; dimensions must divide.
FeatureStack average_pool(const FeatureStack& stack, std::size_t cell);

/// Search-region request: a padding x target window centred on `center_*`
/// (pixel-centre coordinates), resampled to out_rows x out_cols.
struct PatchSpec {
  double center_row = 0.0;
  double center_col = 0.0;
  double target_height = 0.0;
  double target_width = 0.0;
  double padding = 2.0;
  std::size_t out_rows = 0;
  std::size_t out_cols = 0;
};

/// Bilinear resampling of the requested window; pixels outside the frame
/// replicate the nearest border pixel.
Image extract_patch(const Image& frame, const PatchSpec& spec);

/// Grayscale intensities in [0, 1], mean-subtracted. One channel.
FeatureStack raw_features(const Image& patch);

/// Felzenszwalb-style HOG: 2*orientations contrast-sensitive, `orientations`
/// contrast-insensitive and 4 texture-energy channels (31 for the default 9),
/// one cell per output element. Patch dimensions must be multiples of `cell`.
FeatureStack hog_features(const Image& patch, std::size_t orientations = 9, std::size_t cell = 4);

/// 32768-bin RGB -> color-name probability table (11 names).
class ColorNameTable {
 public:
  static constexpr std::size_t kBins = 32768;
  static constexpr std::size_t kNames = 11;
  static constexpr std::array<const char*, kNames> kNameList = {
      "black", "blue", "brown", "grey", "green", "orange", "pink", "purple", "red", "white", "yellow"};

  /// Reads kBins x kNames little-endian float32 values, row-major.
  static ColorNameTable load(const std::filesystem::path& path);
  /// Table shipped with the library ($SCF_CN_TABLE overrides the location).
  static const ColorNameTable& shipped();

  static std::size_t bin_index(float r, float g, float b) noexcept;
  std::span<const float> row(std::size_t bin) const noexcept {
    return {values_.data() + bin * kNames, kNames};
  }

 private:
  std::vector<float> values_;
};

/// Per-pixel name probabilities (each pixel's channels sum to 1).
FeatureStack cn_probabilities(const Image& patch, const ColorNameTable& table);
/// cn_probabilities with every channel mean-centred.
FeatureStack cn_features(const Image& patch, const ColorNameTable& table);

/// Separable Hann window, zero at the borders and 1 at the centre of odd sizes.
RealGrid hann_window(std::size_t rows, std::size_t cols);

/// Multiplies every channel by hann_window. Not idempotent: twice squares the window.
FeatureStack apply_window(const FeatureStack& stack);

enum class FeatureSet { raw, cn, hog, hog_cn };

FeatureSet parse_feature_set(const std::string& name);
std::string to_string(FeatureSet set);
/// Spatial stride of the feature grid relative to patch pixels.
std::size_t feature_cell(FeatureSet set, std::size_t hog_cell);
std::size_t feature_channels(FeatureSet set, std::size_t hog_orientations);

/// Extracts the configured feature set; hog+cn pools CN onto the HOG cell grid.
FeatureStack extract_features(const Image& patch, FeatureSet set, std::size_t hog_orientations,
                              std::size_t hog_cell);

}  // namespace scf
