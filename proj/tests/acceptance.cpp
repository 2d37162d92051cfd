// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scf/bench.hpp"
#include "scf/error.hpp"
#include "scf/tracker.hpp"
#include "scf/verify.hpp"

namespace fs = std::filesystem;
using namespace scf;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Criterion {
  std::string name;
  std::function<std::vector<verify::SuiteReport>()> run;
};

void print_checks(const verify::SuiteReport& report) {
  for (const auto& c : report.checks) {
    std::printf("    %s %s: worst %.6g bound %.6g (%s)\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.worst, c.bound,
                c.detail.c_str());
    if (c.passed || c.replay.empty()) continue;
    std::printf("      replay:\n");
    std::istringstream lines(c.replay);
    for (std::string line; std::getline(lines, line);) std::printf("        %s\n", line.c_str());
  }
}

/// Full-dataset run; returns -1 to skip, 0 on failure, 1 on success.
int dataset_criterion() {
  const char* env = std::getenv("SCF_DATASET");
  if (env == nullptr || *env == '\0') {
    std::printf("SKIP dataset evaluation (SCF_DATASET not set)\n");
    return -1;
  }
  std::vector<fs::path> sequences;
  try {
    sequences = bench::list_sequences(env);
  } catch (const Error& e) {
    std::printf("SKIP dataset evaluation (%s)\n", e.what());
    return -1;
  }
  if (sequences.empty()) {
    std::printf("SKIP dataset evaluation (no sequences under %s)\n", env);
    return -1;
  }

  const TrackerConfig cfg = TrackerConfig::preset(Variant::kscf);
  std::vector<bench::OPEResult> results;
  std::vector<std::string> failures;
  for (const auto& dir : sequences) {
    try {
      bench::OPEResult r = bench::run_ope(cfg, bench::load_sequence(dir));
      for (const auto& e : r.frame_errors) {
        if (!e.empty()) {
          failures.push_back(r.sequence + ": " + e);
          break;
        }
      }
      results.push_back(std::move(r));
    } catch (const Error& e) {
      failures.push_back(dir.filename().string() + ": " + e.what());
    }
  }
  std::map<std::string, bench::Aggregate> table;
  if (!results.empty()) {
    table.emplace("kscf", bench::aggregate(results));
    const fs::path out = fs::current_path() / "acceptance_eval";
    fs::create_directories(out);
    bench::write_summary(out, table);
  }
  const double fps = table.empty() ? 0.0 : table.at("kscf").overall.fps;
  const bool ok = failures.empty() && fps >= 1.0;
  std::printf("%s dataset evaluation (kscf over %zu sequences, no errors, mean FPS >= 1)\n", ok ? "PASS" : "FAIL",
              sequences.size());
  std::printf("    %s completed %zu/%zu sequences\n", failures.empty() ? "ok  " : "FAIL", results.size(),
              sequences.size());
  for (const auto& f : failures) std::printf("      %s\n", f.c_str());
  std::printf("    %s mean FPS %.2f bound 1\n", fps >= 1.0 ? "ok  " : "FAIL", fps);
  if (!table.empty()) {
    const auto& s = table.at("kscf").overall;
    std::printf("    info mean DP@20 %.1f%%  mean AUC %.1f%%\n", 100.0 * s.dp20, 100.0 * s.auc);
  }
  return ok ? 1 : 0;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"solver-oracle equivalence", [] { return std::vector{verify::solver_suite(kSeed)}; }},
      {"multi-channel equivalence", [] { return std::vector{verify::multichannel_suite(kSeed)}; }},
      {"kernel correctness", [] { return std::vector{verify::kernel_suite(kSeed)}; }},
      {"convergence rate", [] { return std::vector{verify::convergence_suite(kSeed)}; }},
      {"complexity", [] { return std::vector{verify::complexity_suite(kSeed)}; }},
      {"tracking sanity", [] { return std::vector{verify::tracking_suite(kSeed)}; }},
      {"metrics", [] { return std::vector{verify::metrics_suite()}; }},
  };

  std::size_t failed = 0;
  for (const auto& c : criteria) {
    std::vector<verify::SuiteReport> reports;
    bool ok = true;
    try {
      reports = c.run();
      for (const auto& r : reports) ok = ok && r.passed();
    } catch (const std::exception& e) {
      ok = false;
      std::printf("FAIL %s (threw: %s)\n", c.name.c_str(), e.what());
      ++failed;
      continue;
    }
    double seconds = 0.0;
    for (const auto& r : reports) seconds += r.seconds;
    std::printf("%s %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.name.c_str(), seconds);
    for (const auto& r : reports) print_checks(r);
    failed += ok ? 0 : 1;
    std::fflush(stdout);
  }
  if (dataset_criterion() == 0) ++failed;

  std::printf("%zu criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
