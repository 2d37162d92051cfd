// SPDX-License-Identifier: Apache-2.0
#include "scf/features.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace scf {

Image to_gray(const Image& image) {
  if (image.channels == 1) return image;
  if (image.channels != 3) throw ShapeError("to_gray: expected 1 or 3 channels");
  Image out(image.rows, image.cols, 1);
  for (std::size_t r = 0; r < image.rows; ++r) {
    for (std::size_t c = 0; c < image.cols; ++c) {
      out.at(r, c) = 0.299F * image.at(r, c, 0) + 0.587F * image.at(r, c, 1) +
                     0.114F * image.at(r, c, 2);
    }
  }
  return out;
}

FeatureStack::FeatureStack(std::vector<RealGrid> channels) : channels_(std::move(channels)) {
  if (channels_.empty()) throw ShapeError("feature stack needs at least one channel");
  for (const auto& ch : channels_) require_same_shape(ch, channels_.front(), "feature stack");
}

FeatureStack::FeatureStack(std::size_t count, std::size_t rows, std::size_t cols)
    : channels_(count, RealGrid(rows, cols)) {
  if (count == 0) throw ShapeError("feature stack needs at least one channel");
}

FeatureStack concat(const FeatureStack& a, const FeatureStack& b) {
  std::vector<RealGrid> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return FeatureStack(std::move(out));
}

FeatureStack average_pool(const FeatureStack& stack, std::size_t cell) {
  if (cell == 0 || stack.rows() % cell != 0 || stack.cols() % cell != 0) {
    throw ShapeError("average_pool: dimensions must be multiples of the cell size");
  }
  const std::size_t rows = stack.rows() / cell;
  const std::size_t cols = stack.cols() / cell;
  const double scale = 1.0 / static_cast<double>(cell * cell);
  FeatureStack out(stack.channels(), rows, cols);
  for (std::size_t l = 0; l < stack.channels(); ++l) {
    for (std::size_t r = 0; r < stack.rows(); ++r) {
      for (std::size_t c = 0; c < stack.cols(); ++c) out[l](r / cell, c / cell) += stack[l](r, c);
    }
    out[l] *= scale;
  }
  return out;
}

Image extract_patch(const Image& frame, const PatchSpec& spec) {
  if (frame.empty()) throw ConfigError("extract_patch: empty frame");
  if (!(spec.target_height > 0.0) || !(spec.target_width > 0.0)) {
    throw ConfigError("extract_patch: degenerate target size");
  }
  if (!(spec.padding >= 1.0)) throw ConfigError("extract_patch: padding must be >= 1");
  if (spec.out_rows == 0 || spec.out_cols == 0) throw ConfigError("extract_patch: empty output");

  const double step_r = spec.padding * spec.target_height / static_cast<double>(spec.out_rows);
  const double step_c = spec.padding * spec.target_width / static_cast<double>(spec.out_cols);
  const double half_r = (static_cast<double>(spec.out_rows) - 1.0) / 2.0;
  const double half_c = (static_cast<double>(spec.out_cols) - 1.0) / 2.0;
  const auto last_r = static_cast<long>(frame.rows) - 1;
  const auto last_c = static_cast<long>(frame.cols) - 1;
  auto clamp = [](long v, long hi) { return static_cast<std::size_t>(std::clamp(v, 0L, hi)); };

  Image out(spec.out_rows, spec.out_cols, frame.channels);
  for (std::size_t i = 0; i < spec.out_rows; ++i) {
    const double sr = spec.center_row + (static_cast<double>(i) - half_r) * step_r;
    const double fr = std::floor(sr);
    const double wr = sr - fr;
    const std::size_t r0 = clamp(static_cast<long>(fr), last_r);
    const std::size_t r1 = clamp(static_cast<long>(fr) + 1, last_r);
    for (std::size_t j = 0; j < spec.out_cols; ++j) {
      const double sc = spec.center_col + (static_cast<double>(j) - half_c) * step_c;
      const double fc = std::floor(sc);
      const double wc = sc - fc;
      const std::size_t c0 = clamp(static_cast<long>(fc), last_c);
      const std::size_t c1 = clamp(static_cast<long>(fc) + 1, last_c);
      for (std::size_t ch = 0; ch < frame.channels; ++ch) {
        const double top = (1.0 - wc) * frame.at(r0, c0, ch) + wc * frame.at(r0, c1, ch);
        const double bottom = (1.0 - wc) * frame.at(r1, c0, ch) + wc * frame.at(r1, c1, ch);
        out.at(i, j, ch) = static_cast<float>((1.0 - wr) * top + wr * bottom);
      }
    }
  }
  return out;
}

FeatureStack raw_features(const Image& patch) {
  if (patch.empty()) throw ConfigError("raw_features: empty patch");
  const Image gray = to_gray(patch);
  RealGrid g(gray.rows, gray.cols);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(gray.pixels[i]) / 255.0;
  const double m = mean(g);
  for (auto& v : g) v -= m;
  return FeatureStack({std::move(g)});
}

FeatureStack hog_features(const Image& patch, std::size_t orientations, std::size_t cell) {
  if (patch.empty()) throw ConfigError("hog_features: empty patch");
  if (orientations == 0 || cell == 0) throw ConfigError("hog_features: bad parameters");
  if (patch.rows % cell != 0 || patch.cols % cell != 0) {
    throw ShapeError("hog_features: patch dimensions must be multiples of the cell size");
  }
  const std::size_t rows = patch.rows;
  const std::size_t cols = patch.cols;
  const std::size_t hr = rows / cell;
  const std::size_t hc = cols / cell;
  const std::size_t bins = 2 * orientations;

  std::vector<double> ux(orientations);
  std::vector<double> uy(orientations);
  for (std::size_t o = 0; o < orientations; ++o) {
    const double a = static_cast<double>(o) * M_PI / static_cast<double>(orientations);
    ux[o] = std::cos(a);
    uy[o] = std::sin(a);
  }

  // Per-cell histogram of 2*orientations contrast-sensitive bins.
  std::vector<double> hist(hr * hc * bins, 0.0);
  auto px = [&](long r, long c, std::size_t ch) {
    r = std::clamp(r, 0L, static_cast<long>(rows) - 1);
    c = std::clamp(c, 0L, static_cast<long>(cols) - 1);
    return static_cast<double>(patch.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c), ch));
  };
  const double inv_cell = 1.0 / static_cast<double>(cell);
  for (long r = 0; r < static_cast<long>(rows); ++r) {
    for (long c = 0; c < static_cast<long>(cols); ++c) {
      double dx = 0.0;
      double dy = 0.0;
      double mag2 = -1.0;
      for (std::size_t ch = 0; ch < patch.channels; ++ch) {
        const double gx = px(r, c + 1, ch) - px(r, c - 1, ch);
        const double gy = px(r + 1, c, ch) - px(r - 1, c, ch);
        if (const double m2 = gx * gx + gy * gy; m2 > mag2) {
          mag2 = m2;
          dx = gx;
          dy = gy;
        }
      }
      const double mag = std::sqrt(mag2);
      if (mag == 0.0) continue;

      std::size_t best = 0;
      double best_dot = -1.0;
      for (std::size_t o = 0; o < orientations; ++o) {
        const double dot = ux[o] * dx + uy[o] * dy;
        if (dot > best_dot) {
          best_dot = dot;
          best = o;
        }
        if (-dot > best_dot) {
          best_dot = -dot;
          best = o + orientations;
        }
      }

      const double yp = (static_cast<double>(r) + 0.5) * inv_cell - 0.5;
      const double xp = (static_cast<double>(c) + 0.5) * inv_cell - 0.5;
      const long iy = static_cast<long>(std::floor(yp));
      const long ix = static_cast<long>(std::floor(xp));
      const double vy1 = yp - static_cast<double>(iy);
      const double vx1 = xp - static_cast<double>(ix);
      const double vy0 = 1.0 - vy1;
      const double vx0 = 1.0 - vx1;
      auto vote = [&](long cy, long cx, double w) {
        if (cy < 0 || cx < 0 || cy >= static_cast<long>(hr) || cx >= static_cast<long>(hc)) return;
        hist[(static_cast<std::size_t>(cy) * hc + static_cast<std::size_t>(cx)) * bins + best] += w * mag;
      };
      vote(iy, ix, vy0 * vx0);
      vote(iy, ix + 1, vy0 * vx1);
      vote(iy + 1, ix, vy1 * vx0);
      vote(iy + 1, ix + 1, vy1 * vx1);
    }
  }

  std::vector<double> energy(hr * hc, 0.0);
  for (std::size_t k = 0; k < hr * hc; ++k) {
    for (std::size_t o = 0; o < orientations; ++o) {
      const double s = hist[k * bins + o] + hist[k * bins + o + orientations];
      energy[k] += s * s;
    }
  }
  auto cell_energy = [&](long cy, long cx) {
    cy = std::clamp(cy, 0L, static_cast<long>(hr) - 1);
    cx = std::clamp(cx, 0L, static_cast<long>(hc) - 1);
    return energy[static_cast<std::size_t>(cy) * hc + static_cast<std::size_t>(cx)];
  };

  const std::size_t channels = 3 * orientations + 4;
  FeatureStack out(channels, hr, hc);
  constexpr double kEps = 1e-4;
  constexpr double kClip = 0.2;
  constexpr double kTexture = 0.2357;
  for (long cy = 0; cy < static_cast<long>(hr); ++cy) {
    for (long cx = 0; cx < static_cast<long>(hc); ++cx) {
      // The four 2x2 blocks containing this cell.
      std::array<double, 4> n{};
      std::size_t b = 0;
      for (long oy : {-1L, 0L}) {
        for (long ox : {-1L, 0L}) {
          const double e = cell_energy(cy + oy, cx + ox) + cell_energy(cy + oy, cx + ox + 1) +
                           cell_energy(cy + oy + 1, cx + ox) + cell_energy(cy + oy + 1, cx + ox + 1);
          n[b++] = 1.0 / std::sqrt(e + kEps);
        }
      }
      const auto r = static_cast<std::size_t>(cy);
      const auto c = static_cast<std::size_t>(cx);
      const double* h = &hist[(r * hc + c) * bins];
      std::array<double, 4> texture{};
      for (std::size_t o = 0; o < bins; ++o) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
          const double v = std::min(h[o] * n[i], kClip);
          sum += v;
          texture[i] += v;
        }
        out[o](r, c) = 0.5 * sum;
      }
      for (std::size_t o = 0; o < orientations; ++o) {
        const double s = h[o] + h[o + orientations];
        double sum = 0.0;
        for (std::size_t i = 0; i < 4; ++i) sum += std::min(s * n[i], kClip);
        out[bins + o](r, c) = 0.5 * sum;
      }
      for (std::size_t i = 0; i < 4; ++i) out[bins + orientations + i](r, c) = kTexture * texture[i];
    }
  }
  return out;
}

ColorNameTable ColorNameTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("color-name table not found: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t expected = kBins * kNames * sizeof(float);
  if (bytes.size() != expected) {
    throw IoError("color-name table " + path.string() + " has " + std::to_string(bytes.size()) +
                  " bytes, expected " + std::to_string(expected));
  }
  ColorNameTable table;
  table.values_.resize(kBins * kNames);
  for (std::size_t i = 0; i < table.values_.size(); ++i) {
    std::uint32_t word = 0;
    std::memcpy(&word, bytes.data() + i * 4, 4);
    if constexpr (std::endian::native == std::endian::big) word = __builtin_bswap32(word);
    float v = 0.0F;
    std::memcpy(&v, &word, 4);
    if (!std::isfinite(v)) throw IoError("color-name table contains non-finite values");
    table.values_[i] = v;
  }
  return table;
}

const ColorNameTable& ColorNameTable::shipped() {
  static const ColorNameTable table = [] {
    if (const char* env = std::getenv("SCF_CN_TABLE"); env != nullptr && *env != '\0') {
      return load(env);
    }
    return load(std::filesystem::path(SCF_DATA_DIR) / "color_names.bin");
  }();
  return table;
}

std::size_t ColorNameTable::bin_index(float r, float g, float b) noexcept {
  auto q = [](float v) {
    return static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(v / 8.0F)), 0, 31));
  };
  return q(r) + 32 * q(g) + 1024 * q(b);
}

FeatureStack cn_probabilities(const Image& patch, const ColorNameTable& table) {
  if (patch.empty()) throw ConfigError("cn_features: empty patch");
  if (patch.channels != 1 && patch.channels != 3) throw ShapeError("cn_features: expected 1 or 3 channels");
  FeatureStack out(ColorNameTable::kNames, patch.rows, patch.cols);
  for (std::size_t r = 0; r < patch.rows; ++r) {
    for (std::size_t c = 0; c < patch.cols; ++c) {
      const bool rgb = patch.channels == 3;
      const float red = patch.at(r, c, 0);
      const std::size_t bin = ColorNameTable::bin_index(red, rgb ? patch.at(r, c, 1) : red,
                                                        rgb ? patch.at(r, c, 2) : red);
      const auto probs = table.row(bin);
      for (std::size_t l = 0; l < ColorNameTable::kNames; ++l) out[l](r, c) = probs[l];
    }
  }
  return out;
}

FeatureStack cn_features(const Image& patch, const ColorNameTable& table) {
  FeatureStack out = cn_probabilities(patch, table);
  for (auto& ch : out) {
    const double m = mean(ch);
    for (auto& v : ch) v -= m;
  }
  return out;
}

RealGrid hann_window(std::size_t rows, std::size_t cols) {
  auto hann = [](std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n == 1) return w;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    if (n % 2 == 1) w[n / 2] = 1.0;
    w.front() = 0.0;
    w.back() = 0.0;
    return w;
  };
  const auto wr = hann(rows);
  const auto wc = hann(cols);
  RealGrid out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = wr[r] * wc[c];
  }
  return out;
}

FeatureStack apply_window(const FeatureStack& stack) {
  const RealGrid w = hann_window(stack.rows(), stack.cols());
  FeatureStack out = stack;
  for (auto& ch : out) {
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] *= w[i];
  }
  return out;
}

FeatureSet parse_feature_set(const std::string& name) {
  if (name == "raw") return FeatureSet::raw;
  if (name == "cn") return FeatureSet::cn;
  if (name == "hog") return FeatureSet::hog;
  if (name == "hog+cn" || name == "hog_cn") return FeatureSet::hog_cn;
  throw ConfigError("unknown feature set '" + name + "' (expected raw, cn, hog, hog+cn)");
}

std::string to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::raw: return "raw";
    case FeatureSet::cn: return "cn";
    case FeatureSet::hog: return "hog";
    case FeatureSet::hog_cn: return "hog+cn";
  }
  return "raw";
}

std::size_t feature_cell(FeatureSet set, std::size_t hog_cell) {
  return set == FeatureSet::hog || set == FeatureSet::hog_cn ? hog_cell : 1;
}

std::size_t feature_channels(FeatureSet set, std::size_t hog_orientations) {
  switch (set) {
    case FeatureSet::raw: return 1;
    case FeatureSet::cn: return ColorNameTable::kNames;
    case FeatureSet::hog: return 3 * hog_orientations + 4;
    case FeatureSet::hog_cn: return 3 * hog_orientations + 4 + ColorNameTable::kNames;
  }
  return 1;
}

FeatureStack extract_features(const Image& patch, FeatureSet set, std::size_t hog_orientations,
                              std::size_t hog_cell) {
  switch (set) {
    case FeatureSet::raw: return raw_features(patch);
    case FeatureSet::cn: return cn_features(patch, ColorNameTable::shipped());
    case FeatureSet::hog: return hog_features(patch, hog_orientations, hog_cell);
    case FeatureSet::hog_cn:
      return concat(hog_features(patch, hog_orientations, hog_cell),
                    average_pool(cn_features(patch, ColorNameTable::shipped()), hog_cell));
  }
  throw ConfigError("unknown feature set");
}

}  // namespace scf
