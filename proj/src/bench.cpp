// SPDX-License-Identifier: Apache-2.0
#include "scf/bench.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace scf::bench {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::vector<BBox> parse_groundtruth(std::istream& in, const std::string& source) {
  std::vector<BBox> boxes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::replace(line.begin(), line.end(), '\t', ' ');
    std::istringstream fields(line);
    std::array<double, 4> v{};
    for (double& x : v) {
      if (!(fields >> x)) {
        throw IoError(source + ":" + std::to_string(line_no) + ": expected four numbers x,y,w,h");
      }
    }
    std::string rest;
    if (fields >> rest) throw IoError(source + ":" + std::to_string(line_no) + ": trailing field '" + rest + "'");
    boxes.push_back({v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
  }
  return boxes;
}

Sequence load_sequence(const fs::path& dir) {
  const fs::path gt = dir / "groundtruth_rect.txt";
  const fs::path img = dir / "img";
  if (!fs::is_regular_file(gt)) throw IoError("missing ground truth: " + gt.string());
  if (!fs::is_directory(img)) throw IoError("missing frame directory: " + img.string());

  Sequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();
  std::ifstream in(gt);
  seq.truth = parse_groundtruth(in, gt.string());

  std::vector<std::pair<long, fs::path>> numbered;
  for (const auto& entry : fs::directory_iterator(img)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext != ".jpg" && ext != ".png" && ext != ".jpeg" && ext != ".bmp") continue;
    const std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), ::isdigit)) continue;
    numbered.emplace_back(std::stol(stem), entry.path());
  }
  std::sort(numbered.begin(), numbered.end());
  for (auto& [n, p] : numbered) seq.frames.push_back(p);
  if (seq.frames.empty()) throw IoError("no numbered frames in " + img.string());
  if (seq.frames.size() != seq.truth.size()) {
    throw IoError(seq.name + ": " + std::to_string(seq.truth.size()) + " ground-truth boxes but " +
                  std::to_string(seq.frames.size()) + " frames");
  }

  if (std::ifstream attrs(dir / "attributes.txt"); attrs) {
    std::string tag;
    std::string all((std::istreambuf_iterator<char>(attrs)), std::istreambuf_iterator<char>());
    std::replace(all.begin(), all.end(), ',', ' ');
    std::istringstream tags(all);
    while (tags >> tag) seq.attributes.push_back(tag);
  }
  return seq;
}

std::vector<fs::path> list_sequences(const fs::path& dataset) {
  if (!fs::is_directory(dataset)) throw IoError("dataset directory not found: " + dataset.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dataset)) {
    if (entry.is_directory() && fs::is_regular_file(entry.path() / "groundtruth_rect.txt")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Image load_image(const fs::path& path) {
  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IoError("cannot decode image: " + path.string());
  Image out(static_cast<std::size_t>(bgr.rows), static_cast<std::size_t>(bgr.cols), 3);
  for (int r = 0; r < bgr.rows; ++r) {
    const auto* row = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < bgr.cols; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c), static_cast<std::size_t>(ch)) = row[c][2 - ch];
      }
    }
  }
  return out;
}

void save_image(const fs::path& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3) throw ConfigError("save_image: expected 1 or 3 channels");
  cv::Mat out(static_cast<int>(image.rows), static_cast<int>(image.cols), image.channels == 3 ? CV_8UC3 : CV_8UC1);
  for (std::size_t r = 0; r < image.rows; ++r) {
    auto* row = out.ptr<unsigned char>(static_cast<int>(r));
    for (std::size_t c = 0; c < image.cols; ++c) {
      for (std::size_t ch = 0; ch < image.channels; ++ch) {
        const std::size_t dst = image.channels == 3 ? 2 - ch : 0;
        const float v = std::clamp(std::round(image.at(r, c, ch)), 0.0F, 255.0F);
        row[c * image.channels + dst] = static_cast<unsigned char>(v);
      }
    }
  }
  if (!cv::imwrite(path.string(), out)) throw IoError("cannot write image: " + path.string());
}

double center_error(const BBox& a, const BBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

double iou(const BBox& a, const BBox& b) {
  const double iw = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double ih = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double precision_threshold(std::size_t k) { return static_cast<double>(k); }
double success_threshold(std::size_t k) { return static_cast<double>(k) / 20.0; }

namespace {

void require_aligned(const std::vector<BBox>& predicted, const std::vector<BBox>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw ShapeError("metric curves need one prediction per ground-truth frame (" + std::to_string(predicted.size()) +
                     " vs " + std::to_string(truth.size()) + ")");
  }
}

}  // namespace

std::vector<double> precision_curve(const std::vector<BBox>& predicted, const std::vector<BBox>& truth) {
  require_aligned(predicted, truth);
  std::vector<double> curve(kPrecisionSamples, 0.0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double err = center_error(predicted[i], truth[i]);
    for (std::size_t k = 0; k < kPrecisionSamples; ++k) curve[k] += err <= precision_threshold(k) ? 1.0 : 0.0;
  }
  for (auto& v : curve) v /= static_cast<double>(truth.size());
  return curve;
}

std::vector<double> success_curve(const std::vector<BBox>& predicted, const std::vector<BBox>& truth) {
  require_aligned(predicted, truth);
  std::vector<double> curve(kSuccessSamples, 0.0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double overlap = iou(predicted[i], truth[i]);
    for (std::size_t k = 0; k < kSuccessSamples; ++k) curve[k] += overlap >= success_threshold(k) ? 1.0 : 0.0;
  }
  for (auto& v : curve) v /= static_cast<double>(truth.size());
  return curve;
}

void score(OPEResult& result, const std::vector<BBox>& truth) {
  result.precision = precision_curve(result.boxes, truth);
  result.success = success_curve(result.boxes, truth);
  result.dp20 = result.precision[20];
  double total = 0.0;
  for (double v : result.success) total += v;
  result.auc = total / static_cast<double>(kSuccessSamples);
}

namespace {

template <class FrameSource>
OPEResult run(const TrackerConfig& cfg, std::size_t count, FrameSource&& frame_at, const std::vector<BBox>& truth,
              const std::string& name) {
  if (count == 0 || truth.size() != count) throw ConfigError(name + ": frames and ground truth must be non-empty and aligned");
  using clock = std::chrono::steady_clock;
  OPEResult result;
  result.sequence = name;
  result.tracker = to_string(cfg.variant);
  result.frame_errors.assign(count, "");
  Tracker tracker(cfg);
  double total_ms = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const Image frame = frame_at(k);
    const auto start = clock::now();
    try {
      if (k == 0) {
        tracker.init(frame, truth[0]);
      } else {
        (void)tracker.step(frame);
      }
    } catch (const Error& e) {
      result.frame_errors[k] = e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    total_ms += ms;
    result.frame_ms.push_back(ms);
    result.boxes.push_back(k == 0 ? truth[0] : tracker.box());
  }
  result.fps = total_ms > 0.0 ? 1000.0 * static_cast<double>(count) / total_ms : 0.0;
  score(result, truth);
  return result;
}

}  // namespace

OPEResult run_ope(const TrackerConfig& cfg, const Sequence& seq) {
  OPEResult r = run(cfg, seq.frames.size(), [&](std::size_t k) { return load_image(seq.frames[k]); }, seq.truth, seq.name);
  r.attributes = seq.attributes;
  return r;
}

OPEResult run_ope(const TrackerConfig& cfg, const std::vector<Image>& frames, const std::vector<BBox>& truth,
                  const std::string& name) {
  return run(cfg, frames.size(), [&](std::size_t k) { return frames[k]; }, truth, name);
}

namespace {

Summary summarise(const std::vector<const OPEResult*>& results) {
  Summary s;
  s.sequences = results.size();
  s.precision.assign(kPrecisionSamples, 0.0);
  s.success.assign(kSuccessSamples, 0.0);
  for (const OPEResult* r : results) {
    s.dp20 += r->dp20;
    s.auc += r->auc;
    s.fps += r->fps;
    for (std::size_t k = 0; k < kPrecisionSamples; ++k) s.precision[k] += r->precision[k];
    for (std::size_t k = 0; k < kSuccessSamples; ++k) s.success[k] += r->success[k];
  }
  const double n = static_cast<double>(results.size());
  s.dp20 /= n;
  s.auc /= n;
  s.fps /= n;
  for (auto& v : s.precision) v /= n;
  for (auto& v : s.success) v /= n;
  return s;
}

}  // namespace

Aggregate aggregate(const std::vector<OPEResult>& results) {
  if (results.empty()) throw ConfigError("aggregate: no results");
  Aggregate agg;
  std::vector<const OPEResult*> all;
  std::map<std::string, std::vector<const OPEResult*>> tagged;
  for (const auto& r : results) {
    all.push_back(&r);
    for (const auto& tag : r.attributes) tagged[tag].push_back(&r);
  }
  agg.overall = summarise(all);
  for (const auto& [tag, list] : tagged) agg.per_attribute.emplace(tag, summarise(list));
  return agg;
}

void write_run(const fs::path& path, const OPEResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write run file: " + path.string());
  for (std::size_t k = 0; k < result.boxes.size(); ++k) {
    const BBox& b = result.boxes[k];
    // 0-based pixel coordinates, as used internally.
    out << json{{"frame", k}, {"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}.dump() << '\n';
  }
}

std::vector<BBox> read_run(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read run file: " + path.string());
  std::vector<BBox> boxes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (j.at("frame").get<std::size_t>() != boxes.size()) throw IoError("frames out of order");
      boxes.push_back({j.at("x").get<double>(), j.at("y").get<double>(), j.at("w").get<double>(), j.at("h").get<double>()});
    } catch (const std::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return boxes;
}

void write_timing(const fs::path& path, const OPEResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write timing file: " + path.string());
  for (std::size_t k = 0; k < result.frame_ms.size(); ++k) {
    json j{{"frame", k}, {"ms", result.frame_ms[k]}};
    if (!result.frame_errors[k].empty()) j["error"] = result.frame_errors[k];
    out << j.dump() << '\n';
  }
}

std::string config_json(const TrackerConfig& cfg) {
  json j;
  j["variant"] = to_string(cfg.variant);
  j["features"] = to_string(cfg.features);
  j["rho"] = cfg.rho;
  j["padding"] = cfg.padding;
  j["scale_pool"] = cfg.scale_pool;
  j["theta_l"] = cfg.theta_l;
  j["theta_u"] = cfg.theta_u;
  j["alpha_numerator"] = cfg.alpha_numerator;
  j["beta"] = cfg.beta;
  j["C"] = cfg.solver.C;
  j["eps_scale"] = cfg.eps_scale;
  j["floor"] = cfg.solver.floor;
  j["anderson"] = cfg.solver.anderson;
  j["init_iter"] = cfg.init_iter;
  j["online_iter"] = cfg.online_iter;
  j["kernel"] = to_string(cfg.kernel.kind);
  j["sigma"] = cfg.kernel.sigma;
  j["degree"] = cfg.kernel.degree;
  j["window"] = cfg.window;
  j["hog_orientations"] = cfg.hog_orientations;
  j["hog_cell"] = cfg.hog_cell;
  j["max_grid_area"] = cfg.max_grid_area;
  return j.dump(2);
}

namespace {

json summary_json(const Summary& s) {
  json curves_p = json::array();
  for (std::size_t k = 0; k < s.precision.size(); ++k) curves_p.push_back({precision_threshold(k), s.precision[k]});
  json curves_s = json::array();
  for (std::size_t k = 0; k < s.success.size(); ++k) curves_s.push_back({success_threshold(k), s.success[k]});
  return {{"sequences", s.sequences}, {"dp20", s.dp20}, {"auc", s.auc}, {"fps", s.fps},
          {"precision", curves_p}, {"success", curves_s}};
}

}  // namespace

void write_summary(const fs::path& dir, const std::map<std::string, Aggregate>& by_tracker) {
  std::ofstream csv(dir / "summary.csv", std::ios::binary);
  if (!csv) throw IoError("cannot write summary in " + dir.string());
  csv << "tracker,subset,sequences,mean_dp20_pct,mean_auc_pct,mean_fps\n";
  json j = json::object();
  auto row = [&](const std::string& tracker, const std::string& subset, const Summary& s) {
    csv << tracker << ',' << subset << ',' << s.sequences << ',' << std::fixed << std::setprecision(1) << 100.0 * s.dp20
        << ',' << 100.0 * s.auc << ',' << s.fps << '\n';
  };
  for (const auto& [tracker, agg] : by_tracker) {
    row(tracker, "all", agg.overall);
    json t{{"all", summary_json(agg.overall)}};
    for (const auto& [tag, s] : agg.per_attribute) {
      row(tracker, tag, s);
      t[tag] = summary_json(s);
    }
    j[tracker] = t;
  }
  std::ofstream js(dir / "summary.json", std::ios::binary);
  js << j.dump(2) << '\n';
}

std::string format_table(const std::map<std::string, Aggregate>& by_tracker) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "tracker" << std::right << std::setw(8) << "seqs" << std::setw(14) << "Mean DP (%)"
     << std::setw(15) << "Mean AUC (%)" << std::setw(11) << "Mean FPS" << '\n';
  os << std::fixed << std::setprecision(1);
  for (const auto& [tracker, agg] : by_tracker) {
    const Summary& s = agg.overall;
    os << std::left << std::setw(10) << tracker << std::right << std::setw(8) << s.sequences << std::setw(14)
       << 100.0 * s.dp20 << std::setw(15) << 100.0 * s.auc << std::setw(11) << s.fps << '\n';
  }
  return os.str();
}

}  // namespace scf::bench
