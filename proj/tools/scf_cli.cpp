// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scf/bench.hpp"
#include "scf/error.hpp"
#include "scf/tracker.hpp"
#include "scf/verify.hpp"

namespace fs = std::filesystem;
using namespace scf;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Overrides {
  std::optional<double> rho, C, padding, theta_l, theta_u, sigma, eps_scale, alpha_numerator, beta;
  std::optional<int> degree;
  std::optional<std::size_t> init_iter, online_iter, anderson, max_grid_area;
  std::optional<std::string> features, kernel;
  std::vector<double> scales;
  bool no_window = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--rho", rho, "Model update rate");
    cmd->add_option("--C", C, "Loss weight");
    cmd->add_option("--padding", padding, "Search window size relative to the target");
    cmd->add_option("--theta-l", theta_l, "Lower labeling threshold");
    cmd->add_option("--theta-u", theta_u, "Upper labeling threshold");
    cmd->add_option("--kernel", kernel, "Kernel: linear, polynomial, gaussian");
    cmd->add_option("--sigma", sigma, "Gaussian kernel width");
    cmd->add_option("--degree", degree, "Polynomial kernel degree");
    cmd->add_option("--features", features, "Features: raw, cn, hog, hog+cn");
    cmd->add_option("--scales", scales, "Scale pool factors")->delimiter(',');
    cmd->add_option("--init-iter", init_iter, "Solver iterations on the first frame");
    cmd->add_option("--online-iter", online_iter, "Solver iterations per frame");
    cmd->add_option("--anderson", anderson, "Acceleration depth (0 disables)");
    cmd->add_option("--eps-scale", eps_scale, "Stopping tolerance per sqrt(labeled samples)");
    cmd->add_option("--alpha-numerator", alpha_numerator, "Confidence map spread numerator");
    cmd->add_option("--beta", beta, "Confidence map shape exponent");
    cmd->add_option("--max-grid-area", max_grid_area, "Largest feature grid (rows * cols)");
    cmd->add_flag("--no-window", no_window, "Disable the cosine window");
  }

  TrackerConfig apply(const std::string& variant) const {
    TrackerConfig cfg = TrackerConfig::preset(parse_variant(variant));
    if (rho) cfg.rho = *rho;
    if (C) cfg.solver.C = *C;
    if (padding) cfg.padding = *padding;
    if (theta_l) cfg.theta_l = *theta_l;
    if (theta_u) cfg.theta_u = *theta_u;
    if (kernel) cfg.kernel.kind = parse_kernel(*kernel);
    if (sigma) cfg.kernel.sigma = *sigma;
    if (degree) cfg.kernel.degree = *degree;
    if (features) cfg.features = parse_feature_set(*features);
    if (!scales.empty()) cfg.scale_pool = scales;
    if (init_iter) cfg.init_iter = *init_iter;
    if (online_iter) cfg.online_iter = *online_iter;
    if (anderson) cfg.solver.anderson = *anderson;
    if (eps_scale) cfg.eps_scale = *eps_scale;
    if (alpha_numerator) cfg.alpha_numerator = *alpha_numerator;
    if (beta) cfg.beta = *beta;
    if (max_grid_area) cfg.max_grid_area = *max_grid_area;
    if (no_window) cfg.window = false;
    validate(cfg);
    return cfg;
  }
};

std::string summary_line(const bench::OPEResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s %-20s frames %5zu  DP@20 %5.1f%%  AUC %5.1f%%  FPS %7.2f", r.tracker.c_str(),
                r.sequence.c_str(), r.boxes.size(), 100.0 * r.dp20, 100.0 * r.auc, r.fps);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text << '\n';
}

std::size_t count_errors(const bench::OPEResult& r) {
  std::size_t n = 0;
  for (const auto& e : r.frame_errors) n += e.empty() ? 0 : 1;
  return n;
}

int run_track(const std::string& seq_dir, const std::string& variant, const std::string& out_dir,
              const Overrides& overrides) {
  const TrackerConfig cfg = overrides.apply(variant);
  const bench::Sequence seq = bench::load_sequence(seq_dir);
  fs::create_directories(out_dir);
  const bench::OPEResult result = bench::run_ope(cfg, seq);
  write_text(fs::path(out_dir) / "config.json", bench::config_json(cfg));
  bench::write_run(fs::path(out_dir) / (seq.name + ".jsonl"), result);
  bench::write_timing(fs::path(out_dir) / (seq.name + ".timing.jsonl"), result);
  std::cout << summary_line(result) << '\n';
  if (const std::size_t errors = count_errors(result); errors > 0) {
    std::cerr << seq.name << ": " << errors << " frame(s) raised errors, see the timing file\n";
  }
  return kOk;
}

int run_eval(const std::string& dataset, const std::vector<std::string>& variants,
             const std::vector<std::string>& filter, const std::string& out_dir, const Overrides& overrides) {
  if (dataset.empty()) throw ConfigError("no dataset given (use --dataset or set SCF_DATASET)");
  std::vector<fs::path> sequences = bench::list_sequences(dataset);
  if (!filter.empty()) {
    std::vector<fs::path> kept;
    for (const auto& p : sequences) {
      if (std::find(filter.begin(), filter.end(), p.filename().string()) != filter.end()) kept.push_back(p);
    }
    sequences = std::move(kept);
  }
  if (sequences.empty()) throw ConfigError("no sequences found in " + dataset);

  std::map<std::string, TrackerConfig> configs;
  for (const auto& v : variants) configs.emplace(to_string(parse_variant(v)), overrides.apply(v));

  fs::create_directories(out_dir);
  std::map<std::string, bench::Aggregate> table;
  std::size_t failures = 0;
  for (const auto& [name, cfg] : configs) {
    const fs::path dir = fs::path(out_dir) / name;
    fs::create_directories(dir);
    write_text(dir / "config.json", bench::config_json(cfg));
    std::vector<bench::OPEResult> results;
    for (const auto& seq_dir : sequences) {
      try {
        const bench::Sequence seq = bench::load_sequence(seq_dir);
        bench::OPEResult result = bench::run_ope(cfg, seq);
        bench::write_run(dir / (seq.name + ".jsonl"), result);
        bench::write_timing(dir / (seq.name + ".timing.jsonl"), result);
        std::cout << summary_line(result) << std::endl;
        results.push_back(std::move(result));
      } catch (const Error& e) {
        ++failures;
        std::cerr << name << " " << seq_dir.filename().string() << ": " << e.what() << '\n';
      }
    }
    if (!results.empty()) table.emplace(name, bench::aggregate(results));
  }
  if (table.empty()) {
    std::cerr << "every run failed; no summary written\n";
    return kFailed;
  }
  bench::write_summary(out_dir, table);
  std::cout << '\n' << bench::format_table(table);
  if (failures > 0) std::cerr << failures << " run(s) failed and are excluded from the summary\n";
  return kOk;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
  bool ok = true;
  for (const auto& report : verify::run_suite(suite, seed)) {
    std::cout << "[" << report.suite << "]\n" << verify::format(report);
    ok = ok && report.passed();
  }
  std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
  return ok ? kOk : kFailed;
}

int run_bench_speed(const std::vector<std::size_t>& sizes, const std::string& variant, std::uint64_t seed,
                    std::size_t repeats) {
  const auto rows = verify::bench_speed(sizes, parse_variant(variant), seed, repeats);
  std::printf("%6s %16s %8s %22s\n", "n", "s/iteration", "ratio", "transforms/iteration");
  for (const auto& row : rows) {
    if (row.ratio > 0.0) {
      std::printf("%6zu %16.4e %8.2f %22.2f\n", row.n, row.seconds_per_iteration, row.ratio,
                  row.transforms_per_iteration);
    } else {
      std::printf("%6zu %16.4e %8s %22.2f\n", row.n, row.seconds_per_iteration, "-", row.transforms_per_iteration);
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support correlation filter tracking and evaluation"};
  app.require_subcommand(1);

  Overrides track_overrides;
  std::string seq_dir;
  std::string track_variant = "scf";
  std::string track_out = "out";
  auto* track = app.add_subcommand("track", "Run one-pass evaluation on a single sequence");
  track->add_option("--seq", seq_dir, "Sequence directory (img/ and groundtruth_rect.txt)")->required();
  track->add_option("--variant", track_variant, "scf, mscf, kscf or skscf");
  track->add_option("--out", track_out, "Output directory");
  track_overrides.attach(track);

  Overrides eval_overrides;
  const char* env_dataset = std::getenv("SCF_DATASET");
  std::string dataset = env_dataset != nullptr ? env_dataset : "";
  std::vector<std::string> variants{"kscf"};
  std::vector<std::string> sequence_filter;
  std::string eval_out = "out";
  auto* eval = app.add_subcommand("eval", "Run every (variant, sequence) pair and aggregate");
  eval->add_option("--dataset", dataset, "Dataset directory (default: $SCF_DATASET)");
  eval->add_option("--variants", variants, "Comma-separated variants")->delimiter(',');
  eval->add_option("--sequences", sequence_filter, "Only these sequence names")->delimiter(',');
  eval->add_option("--out", eval_out, "Output directory");
  eval_overrides.attach(eval);

  std::string suite = "all";
  std::uint64_t seed = 7;
  auto* ver = app.add_subcommand("verify", "Oracle equivalence and property suites");
  ver->add_option("--suite", suite, "solver, kernel, convergence, metrics or all");
  ver->add_option("--seed", seed, "Seed for the random instances");

  std::vector<std::size_t> sizes{32, 64, 128};
  std::string speed_variant = "scf";
  std::uint64_t speed_seed = 7;
  std::size_t repeats = 15;
  auto* speed = app.add_subcommand("bench-speed", "Per-iteration solver cost against grid size");
  speed->add_option("--sizes", sizes, "Comma-separated grid sizes")->delimiter(',');
  speed->add_option("--variant", speed_variant, "scf, mscf, kscf or skscf");
  speed->add_option("--seed", speed_seed, "Seed for the synthetic inputs");
  speed->add_option("--repeats", repeats, "Timing repetitions (best is kept)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*track) return run_track(seq_dir, track_variant, track_out, track_overrides);
    if (*eval) return run_eval(dataset, variants, sequence_filter, eval_out, eval_overrides);
    if (*ver) return run_verify(suite, seed);
    if (*speed) return run_bench_speed(sizes, speed_variant, speed_seed, repeats);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
