// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scf/features.hpp"
#include "scf/kscf.hpp"
#include "scf/mscf.hpp"
#include "scf/scf_core.hpp"

namespace scf {

enum class Variant { scf, mscf, kscf, skscf };

Variant parse_variant(const std::string& name);
std::string to_string(Variant v);

struct TrackerConfig {
  Variant variant = Variant::scf;
  FeatureSet features = FeatureSet::raw;
  double rho = 0.075;
  double padding = 2.0;
  std::vector<double> scale_pool{1.0};
  double theta_l = 0.3;
  double theta_u = 0.7;
  /// alpha = alpha_numerator / (m * n) with m x n the target size in feature cells.
  double alpha_numerator = 50.0;
  double beta = 2.0;
  SolverConfig solver{};
  /// eps = eps_scale * sqrt(labeled samples).
  double eps_scale = 1e-3;
  std::size_t init_iter = 100;
  std::size_t online_iter = 10;
  KernelSpec kernel{};
  bool window = true;
  std::size_t hog_orientations = 9;
  std::size_t hog_cell = 4;
  /// Upper bound on rows * cols of the feature grid; larger search windows are downsampled.
  std::size_t max_grid_area = 2500;

  static TrackerConfig preset(Variant v);
};

void validate(const TrackerConfig& cfg);

/// Axis-aligned box: top-left corner and size in pixels (0-based).
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double center_x() const noexcept { return x + w / 2.0; }
  double center_y() const noexcept { return y + h / 2.0; }
  bool operator==(const BBox&) const = default;
};

/// Displacement in (-n/2, n/2] of the content for a response peak at index u.
long decode_shift(std::size_t index, std::size_t n);
/// Peak index produced by content displaced by d (inverse of decode_shift on its range).
std::size_t encode_shift(long displacement, std::size_t n);

SupportFilter blend(const SupportFilter& old_model, const SupportFilter& new_model, double rho);
MultiFilter blend(const MultiFilter& old_model, const MultiFilter& new_model, double rho);
DualFilter blend(const DualFilter& old_model, const DualFilter& new_model, double rho);

struct StepResult {
  BBox box;
  /// Pool factor selected this frame.
  double scale_factor = 1.0;
  /// Detected content displacement in feature cells.
  long dr = 0;
  long dc = 0;
  double peak = 0.0;
  bool clamped = false;
  SolveReport report;
};

class Tracker {
 public:
  using Model = std::variant<SupportFilter, MultiFilter, DualFilter>;

  explicit Tracker(TrackerConfig cfg);

  /// Trains on the first frame; returns the report of the initial solve.
  SolveReport init(const Image& frame, const BBox& box);
  StepResult step(const Image& frame);

  const BBox& box() const noexcept { return box_; }
  /// Cumulative scale relative to the initial box.
  double scale() const noexcept { return scale_; }
  const TrackerConfig& config() const noexcept { return cfg_; }
  std::size_t grid_rows() const noexcept { return grid_rows_; }
  std::size_t grid_cols() const noexcept { return grid_cols_; }
  const Model& model() const noexcept { return model_; }

  /// Response map over the feature grid for a search window scaled by `factor`.
  RealGrid response_at(const Image& frame, double factor) const;

 private:
  FeatureStack features_at(const Image& frame, double center_row, double center_col, double factor) const;
  Model train(const FeatureStack& x, const Model* warm, std::size_t max_iter) const;
  bool clamp_center(const Image& frame);

  TrackerConfig cfg_;
  BBox box_;
  double base_w_ = 0.0;
  double base_h_ = 0.0;
  double scale_ = 1.0;
  std::size_t cell_ = 1;
  std::size_t patch_rows_ = 0;
  std::size_t patch_cols_ = 0;
  std::size_t grid_rows_ = 0;
  std::size_t grid_cols_ = 0;
  std::optional<LabelGrid> labels_;
  Model model_;
  bool initialised_ = false;
};

}  // namespace scf
