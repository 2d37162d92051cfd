// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scf/features.hpp"
#include "scf/tracker.hpp"

namespace scf::bench {

/// OTB-style sequence: img/ with numbered frames and groundtruth_rect.txt,
/// plus an optional attributes.txt listing tags (IV, SV, OCC, ...).
struct Sequence {
  std::string name;
  std::vector<std::filesystem::path> frames;
  std::vector<BBox> truth;
  std::vector<std::string> attributes;
};

/// Parses "x,y,w,h" lines (comma, tab or space separated, 1-based) into 0-based boxes.
std::vector<BBox> parse_groundtruth(std::istream& in, const std::string& source);
Sequence load_sequence(const std::filesystem::path& dir);
/// Sequence directories (those containing groundtruth_rect.txt) sorted by name.
std::vector<std::filesystem::path> list_sequences(const std::filesystem::path& dataset);
/// Decodes an image file into RGB floats.
Image load_image(const std::filesystem::path& path);
/// Encodes an RGB or grayscale image (values rounded to 8 bits); format from the extension.
void save_image(const std::filesystem::path& path, const Image& image);

double center_error(const BBox& a, const BBox& b);
double iou(const BBox& a, const BBox& b);

inline constexpr std::size_t kPrecisionSamples = 51;  // 0..50 px
inline constexpr std::size_t kSuccessSamples = 21;    // 0, 0.05, ..., 1
double precision_threshold(std::size_t k);
double success_threshold(std::size_t k);

/// Fraction of frames with center error <= threshold.
std::vector<double> precision_curve(const std::vector<BBox>& predicted, const std::vector<BBox>& truth);
/// Fraction of frames with IoU >= threshold.
std::vector<double> success_curve(const std::vector<BBox>& predicted, const std::vector<BBox>& truth);

struct OPEResult {
  std::string sequence;
  std::string tracker;
  std::vector<std::string> attributes;
  std::vector<BBox> boxes;
  std::vector<double> frame_ms;
  std::vector<std::string> frame_errors;
  std::vector<double> precision;
  std::vector<double> success;
  double dp20 = 0.0;
  double auc = 0.0;
  double fps = 0.0;
};

/// Fills curves, DP@20 and AUC of `result` from its boxes.
void score(OPEResult& result, const std::vector<BBox>& truth);

/// One pass from the first ground-truth box; frames are decoded outside the timed region.
OPEResult run_ope(const TrackerConfig& cfg, const Sequence& seq);
OPEResult run_ope(const TrackerConfig& cfg, const std::vector<Image>& frames, const std::vector<BBox>& truth,
                  const std::string& name);

struct Summary {
  std::size_t sequences = 0;
  double dp20 = 0.0;
  double auc = 0.0;
  double fps = 0.0;
  std::vector<double> precision;
  std::vector<double> success;
};

struct Aggregate {
  Summary overall;
  /// Only attributes carried by at least one sequence appear.
  std::map<std::string, Summary> per_attribute;
};

Aggregate aggregate(const std::vector<OPEResult>& results);

/// Run file: one JSON object per line, {"frame", "x", "y", "w", "h"}.
void write_run(const std::filesystem::path& path, const OPEResult& result);
std::vector<BBox> read_run(const std::filesystem::path& path);
/// Timing file: one JSON object per line, {"frame", "ms"}.
void write_timing(const std::filesystem::path& path, const OPEResult& result);

std::string config_json(const TrackerConfig& cfg);

/// Table rows per tracker plus per-attribute rows; CSV and JSON (with curves).
void write_summary(const std::filesystem::path& dir, const std::map<std::string, Aggregate>& by_tracker);
std::string format_table(const std::map<std::string, Aggregate>& by_tracker);

}  // namespace scf::bench
