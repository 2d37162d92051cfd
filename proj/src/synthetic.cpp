// SPDX-License-Identifier: Apache-2.0
#include "scf/synthetic.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace scf::synthetic {
namespace {

FeatureStack random_stack(std::size_t channels, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<RealGrid> out;
  for (std::size_t l = 0; l < channels; ++l) {
    RealGrid g(rows, cols);
    for (auto& v : g) v = dist(rng);
    out.push_back(std::move(g));
  }
  return FeatureStack(std::move(out));
}

}  // namespace

Instance random_instance(std::size_t rows, std::size_t cols, std::size_t channels, double theta_l,
                         double theta_u, double C, std::uint64_t seed, double alpha) {
  std::mt19937_64 rng(seed);
  FeatureStack x = random_stack(channels, rows, cols, rng);
  LabelGrid y = assign_labels(confidence_map(rows, cols, alpha, 2.0), theta_l, theta_u);
  return {std::move(x), std::move(y), C, seed};
}

Instance full_label_instance(std::size_t rows, std::size_t cols, double C, std::uint64_t seed, double alpha) {
  std::mt19937_64 rng(seed);
  FeatureStack x = random_stack(1, rows, cols, rng);
  const ConfidenceMap map = confidence_map(rows, cols, alpha, 2.0);
  RealGrid y(rows, cols);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = map.values[i] >= 0.5 ? 1.0 : -1.0;
  return {std::move(x), LabelGrid(std::move(y)), C, seed};
}

std::string describe(const Instance& inst) {
  std::ostringstream os;
  os.precision(17);
  os << "seed=" << inst.seed << " C=" << inst.C << " shape=" << inst.x.channels() << "x" << inst.x.rows() << "x"
     << inst.x.cols() << "\nlabels:";
  for (std::size_t i = 0; i < inst.y.size(); ++i) os << (i % inst.y.cols() == 0 ? "\n  " : " ") << inst.y[i];
  for (std::size_t l = 0; l < inst.x.channels(); ++l) {
    os << "\nchannel " << l << ":";
    for (std::size_t i = 0; i < inst.x[l].size(); ++i) {
      os << (i % inst.x.cols() == 0 ? "\n  " : " ") << inst.x[l][i];
    }
  }
  return os.str();
}

Image texture(std::size_t rows, std::size_t cols, std::size_t channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(0.5, 4.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> angle(0.0, M_PI);
  constexpr int kWaves = 6;
  Image out(rows, cols, channels);
  for (std::size_t ch = 0; ch < channels; ++ch) {
    std::array<double, kWaves> kx{};
    std::array<double, kWaves> ky{};
    std::array<double, kWaves> ph{};
    for (int w = 0; w < kWaves; ++w) {
      const double a = angle(rng);
      const double f = freq(rng);
      // Integer cycles per period keep the texture seamless under cyclic shifts.
      kx[w] = 2.0 * M_PI * std::round(f * std::cos(a) + 1.0) / static_cast<double>(cols);
      ky[w] = 2.0 * M_PI * std::round(f * std::sin(a)) / static_cast<double>(rows);
      ph[w] = phase(rng);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        double v = 0.0;
        for (int w = 0; w < kWaves; ++w) {
          v += std::sin(kx[w] * static_cast<double>(c) + ky[w] * static_cast<double>(r) + ph[w]);
        }
        out.at(r, c, ch) = static_cast<float>(127.5 + 127.5 * v / kWaves);
      }
    }
  }
  return out;
}

Image cyclic_shift(const Image& image, long dr, long dc) {
  Image out(image.rows, image.cols, image.channels);
  const auto rows = static_cast<long>(image.rows);
  const auto cols = static_cast<long>(image.cols);
  for (long r = 0; r < rows; ++r) {
    const auto sr = static_cast<std::size_t>(((r - dr) % rows + rows) % rows);
    for (long c = 0; c < cols; ++c) {
      const auto sc = static_cast<std::size_t>(((c - dc) % cols + cols) % cols);
      for (std::size_t ch = 0; ch < image.channels; ++ch) {
        out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c), ch) = image.at(sr, sc, ch);
      }
    }
  }
  return out;
}

Image zoom_about_center(const Image& image, double zoom) {
  if (!(zoom > 0.0)) throw ConfigError("zoom must be positive");
  PatchSpec spec;
  spec.center_row = (static_cast<double>(image.rows) - 1.0) / 2.0;
  spec.center_col = (static_cast<double>(image.cols) - 1.0) / 2.0;
  spec.target_height = static_cast<double>(image.rows) / zoom;
  spec.target_width = static_cast<double>(image.cols) / zoom;
  spec.padding = 1.0;
  spec.out_rows = image.rows;
  spec.out_cols = image.cols;
  return extract_patch(image, spec);
}

Image tile(const Image& image, std::size_t k) {
  Image out(image.rows * k, image.cols * k, image.channels);
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      for (std::size_t ch = 0; ch < image.channels; ++ch) out.at(r, c, ch) = image.at(r % image.rows, c % image.cols, ch);
    }
  }
  return out;
}

}  // namespace scf::synthetic
