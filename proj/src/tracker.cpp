// SPDX-License-Identifier: Apache-2.0
#include "scf/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "scf/labeling.hpp"
#include "scf/spectral.hpp"

namespace scf {

Variant parse_variant(const std::string& name) {
  if (name == "scf") return Variant::scf;
  if (name == "mscf") return Variant::mscf;
  if (name == "kscf") return Variant::kscf;
  if (name == "skscf") return Variant::skscf;
  throw ConfigError("unknown variant '" + name + "' (expected scf, mscf, kscf, skscf)");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::scf: return "scf";
    case Variant::mscf: return "mscf";
    case Variant::kscf: return "kscf";
    case Variant::skscf: return "skscf";
  }
  return "scf";
}

TrackerConfig TrackerConfig::preset(Variant v) {
  TrackerConfig cfg;
  cfg.variant = v;
  cfg.solver.C = 1e4;
  cfg.beta = 2.0;
  switch (v) {
    case Variant::scf:
      cfg.features = FeatureSet::raw;
      cfg.rho = 0.075;
      cfg.theta_l = 0.3;
      cfg.theta_u = 0.7;
      break;
    case Variant::mscf:
      cfg.features = FeatureSet::hog_cn;
      cfg.rho = 0.02;
      cfg.theta_l = 0.4;
      cfg.theta_u = 0.9;
      break;
    case Variant::kscf:
    case Variant::skscf:
      cfg.features = FeatureSet::hog_cn;
      cfg.rho = 0.02;
      cfg.theta_l = 0.5;
      cfg.theta_u = 0.7;
      cfg.kernel = KernelSpec::gaussian(0.2);
      break;
  }
  if (v == Variant::skscf) cfg.scale_pool = {0.985, 0.990, 0.995, 1.0, 1.005, 1.010, 1.015};
  return cfg;
}

void validate(const TrackerConfig& cfg) {
  validate(cfg.solver);
  validate(cfg.kernel);
  if (!(cfg.rho > 0.0 && cfg.rho <= 1.0)) throw ConfigError("adaption rate must lie in (0, 1]");
  if (!(cfg.padding >= 1.0)) throw ConfigError("padding must be >= 1");
  if (cfg.scale_pool.empty() || !std::is_sorted(cfg.scale_pool.begin(), cfg.scale_pool.end()) ||
      std::find(cfg.scale_pool.begin(), cfg.scale_pool.end(), 1.0) == cfg.scale_pool.end()) {
    throw ConfigError("scale pool must be sorted ascending and contain 1.0");
  }
  for (double s : cfg.scale_pool) {
    if (!(s > 0.0)) throw ConfigError("scale pool entries must be positive");
  }
  if (!(cfg.theta_l > 0.0 && cfg.theta_l < cfg.theta_u && cfg.theta_u < 1.0)) {
    throw ConfigError("label thresholds need 0 < theta_l < theta_u < 1");
  }
  if (!(cfg.alpha_numerator > 0.0) || !(cfg.beta > 0.0)) throw ConfigError("confidence map needs alpha, beta > 0");
  if (!(cfg.eps_scale > 0.0)) throw ConfigError("eps_scale must be positive");
  if (cfg.init_iter < 1 || cfg.online_iter < 1) throw ConfigError("iteration budgets must be at least 1");
  if (cfg.max_grid_area < 16) throw ConfigError("max_grid_area must be at least 16");
  const bool linear = cfg.variant == Variant::scf || cfg.variant == Variant::mscf;
  if (cfg.variant == Variant::scf && cfg.features != FeatureSet::raw) {
    throw ConfigError("the single-channel variant uses raw features");
  }
  if (linear && cfg.scale_pool.size() > 1) throw ConfigError("scale pools need the skscf variant");
}

long decode_shift(std::size_t index, std::size_t n) {
  const auto u = static_cast<long>(index % n);
  const auto len = static_cast<long>(n);
  const long wrapped = 2 * u >= len ? u - len : u;
  return -wrapped;
}

std::size_t encode_shift(long displacement, std::size_t n) {
  const auto len = static_cast<long>(n);
  return static_cast<std::size_t>(((-displacement) % len + len) % len);
}

namespace {

ComplexGrid mix(const ComplexGrid& a, const ComplexGrid& b, double rho) {
  require_same_shape(a, b, "blend");
  ComplexGrid out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - rho) * a[i] + rho * b[i];
  return out;
}

void check_rate(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("blend rate must lie in [0, 1]");
}

}  // namespace

SupportFilter blend(const SupportFilter& old_model, const SupportFilter& new_model, double rho) {
  check_rate(rho);
  return {mix(old_model.w_hat, new_model.w_hat, rho), (1.0 - rho) * old_model.bias + rho * new_model.bias,
          new_model.report};
}

MultiFilter blend(const MultiFilter& old_model, const MultiFilter& new_model, double rho) {
  check_rate(rho);
  if (old_model.w_hat.size() != new_model.w_hat.size()) throw ShapeError("blend: channel count mismatch");
  MultiFilter out{{}, (1.0 - rho) * old_model.bias + rho * new_model.bias, new_model.report};
  for (std::size_t l = 0; l < old_model.w_hat.size(); ++l) {
    out.w_hat.push_back(mix(old_model.w_hat[l], new_model.w_hat[l], rho));
  }
  return out;
}

DualFilter blend(const DualFilter& old_model, const DualFilter& new_model, double rho) {
  check_rate(rho);
  if (!old_model.templ.same_layout(new_model.templ)) throw ShapeError("blend: template layout mismatch");
  std::vector<RealGrid> templ;
  for (std::size_t l = 0; l < old_model.templ.channels(); ++l) {
    RealGrid ch = old_model.templ[l];
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] = (1.0 - rho) * ch[i] + rho * new_model.templ[l][i];
    templ.push_back(std::move(ch));
  }
  return {mix(old_model.alpha_hat, new_model.alpha_hat, rho), (1.0 - rho) * old_model.bias + rho * new_model.bias,
          FeatureStack(std::move(templ)), new_model.report};
}

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)) { validate(cfg_); }

FeatureStack Tracker::features_at(const Image& frame, double center_row, double center_col, double factor) const {
  PatchSpec spec;
  spec.center_row = center_row;
  spec.center_col = center_col;
  spec.target_height = base_h_ * scale_ * factor;
  spec.target_width = base_w_ * scale_ * factor;
  spec.padding = cfg_.padding;
  spec.out_rows = patch_rows_;
  spec.out_cols = patch_cols_;
  const Image patch = extract_patch(frame, spec);
  FeatureStack x = extract_features(patch, cfg_.features, cfg_.hog_orientations, cfg_.hog_cell);
  return cfg_.window ? apply_window(x) : x;
}

Tracker::Model Tracker::train(const FeatureStack& x, const Model* warm, std::size_t max_iter) const {
  SolverConfig solver = cfg_.solver;
  solver.max_iter = max_iter;
  solver.eps = cfg_.eps_scale * std::sqrt(static_cast<double>(labels_->labeled()));
  switch (cfg_.variant) {
    case Variant::scf:
      return solve_scf(x[0], *labels_, solver, warm != nullptr ? &std::get<SupportFilter>(*warm) : nullptr);
    case Variant::mscf:
      return solve_mscf(x, *labels_, solver, warm != nullptr ? &std::get<MultiFilter>(*warm) : nullptr);
    case Variant::kscf:
    case Variant::skscf:
      return solve_kscf(x, *labels_, cfg_.kernel, solver, warm != nullptr ? &std::get<DualFilter>(*warm) : nullptr);
  }
  throw ConfigError("unknown variant");
}

SolveReport Tracker::init(const Image& frame, const BBox& box) {
  if (frame.empty()) throw ConfigError("tracker init: empty frame");
  if (!(box.w > 0.0) || !(box.h > 0.0)) throw ConfigError("tracker init: degenerate box");
  box_ = box;
  base_w_ = box.w;
  base_h_ = box.h;
  scale_ = 1.0;
  clamp_center(frame);

  cell_ = feature_cell(cfg_.features, cfg_.hog_cell);
  const double cell = static_cast<double>(cell_);
  double grid_h = cfg_.padding * box.h / cell;
  double grid_w = cfg_.padding * box.w / cell;
  const double area = grid_h * grid_w;
  if (area > static_cast<double>(cfg_.max_grid_area)) {
    const double shrink = std::sqrt(static_cast<double>(cfg_.max_grid_area) / area);
    grid_h *= shrink;
    grid_w *= shrink;
  }
  grid_rows_ = static_cast<std::size_t>(std::max(4.0, std::round(grid_h)));
  grid_cols_ = static_cast<std::size_t>(std::max(4.0, std::round(grid_w)));
  patch_rows_ = grid_rows_ * cell_;
  patch_cols_ = grid_cols_ * cell_;

  const double alpha = cfg_.alpha_numerator / ((static_cast<double>(grid_rows_) / cfg_.padding) *
                                               (static_cast<double>(grid_cols_) / cfg_.padding));
  labels_.emplace(assign_labels(confidence_map(grid_rows_, grid_cols_, alpha, cfg_.beta), cfg_.theta_l, cfg_.theta_u));

  const FeatureStack x = features_at(frame, box_.center_y() - 0.5, box_.center_x() - 0.5, 1.0);
  model_ = train(x, nullptr, cfg_.init_iter);
  initialised_ = true;
  return std::visit([](const auto& m) { return m.report; }, model_);
}

RealGrid Tracker::response_at(const Image& frame, double factor) const {
  if (!initialised_) throw ConfigError("tracker used before init");
  const FeatureStack z = features_at(frame, box_.center_y() - 0.5, box_.center_x() - 0.5, factor);
  return std::visit(
      [&](const auto& m) -> RealGrid {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, SupportFilter>) {
          return response(spectral::dft2(z[0]), m);
        } else if constexpr (std::is_same_v<M, MultiFilter>) {
          return multichannel_response(dft2_stack(z), m);
        } else {
          return kernel_response(m, z, cfg_.kernel);
        }
      },
      model_);
}

bool Tracker::clamp_center(const Image& frame) {
  const double cx = std::clamp(box_.center_x(), 0.0, static_cast<double>(frame.cols));
  const double cy = std::clamp(box_.center_y(), 0.0, static_cast<double>(frame.rows));
  const bool moved = cx != box_.center_x() || cy != box_.center_y();
  box_.x = cx - box_.w / 2.0;
  box_.y = cy - box_.h / 2.0;
  return moved;
}

StepResult Tracker::step(const Image& frame) {
  if (!initialised_) throw ConfigError("tracker used before init");
  if (frame.empty()) throw ConfigError("tracker step: empty frame");

  struct Candidate {
    double value;
    long dr, dc;
    double factor;
  };
  std::optional<Candidate> best;
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    const long ma = a.dr * a.dr + a.dc * a.dc;
    const long mb = b.dr * b.dr + b.dc * b.dc;
    if (ma != mb) return ma < mb;
    return std::abs(a.factor - 1.0) < std::abs(b.factor - 1.0);
  };
  for (double factor : cfg_.scale_pool) {
    const RealGrid f = response_at(frame, factor);
    // Row-major scan with strict improvement keeps the first index among equal candidates.
    for (std::size_t r = 0; r < f.rows(); ++r) {
      for (std::size_t c = 0; c < f.cols(); ++c) {
        const Candidate cand{f(r, c), decode_shift(r, f.rows()), decode_shift(c, f.cols()), factor};
        if (!best || better(cand, *best)) best = cand;
      }
    }
  }

  StepResult result;
  result.scale_factor = best->factor;
  result.dr = best->dr;
  result.dc = best->dc;
  result.peak = best->value;
  const double window_h = cfg_.padding * base_h_ * scale_ * best->factor;
  const double window_w = cfg_.padding * base_w_ * scale_ * best->factor;
  const double dy = static_cast<double>(best->dr) * window_h / static_cast<double>(grid_rows_);
  const double dx = static_cast<double>(best->dc) * window_w / static_cast<double>(grid_cols_);
  const double cx = box_.center_x() + dx;
  const double cy = box_.center_y() + dy;
  scale_ *= best->factor;
  box_.w = base_w_ * scale_;
  box_.h = base_h_ * scale_;
  box_.x = cx - box_.w / 2.0;
  box_.y = cy - box_.h / 2.0;
  result.clamped = clamp_center(frame);

  const FeatureStack x = features_at(frame, box_.center_y() - 0.5, box_.center_x() - 0.5, 1.0);
  const Model fresh = train(x, &model_, cfg_.online_iter);
  model_ = std::visit(
      [&](const auto& old_model) -> Model {
        using M = std::decay_t<decltype(old_model)>;
        return blend(old_model, std::get<M>(fresh), cfg_.rho);
      },
      model_);
  result.report = std::visit([](const auto& m) { return m.report; }, fresh);
  result.box = box_;
  return result;
}

}  // namespace scf
