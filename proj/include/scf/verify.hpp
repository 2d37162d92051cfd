// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scf/tracker.hpp"

namespace scf::verify {

struct Check {
  std::string name;
  bool passed = true;
  /// Worst observed value of the checked quantity and the bound it is held to.
  double worst = 0.0;
  double bound = 0.0;
  std::string detail;
  /// Serialized failing instance, empty when the check passed.
  std::string replay;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool passed() const noexcept;
};

/// Single-channel solver against the dense QP; instances alternate C = 1 and C = 1e4.
SuiteReport solver_suite(std::uint64_t seed, std::size_t instances = 50);
/// Multi-channel solver against the channel-concatenated QP, L in {2, 3}.
SuiteReport multichannel_suite(std::uint64_t seed, std::size_t instances = 20);
/// Kernel circulance, first row and dual objective against the dense kernel QP.
SuiteReport kernel_suite(std::uint64_t seed, std::size_t instances = 20);
/// Fully labeled instances run without acceleration; spectral radius and rate conditions.
SuiteReport convergence_suite(std::uint64_t seed, std::size_t instances = 20);
/// Hand-computed metric fixtures.
SuiteReport metrics_suite();

struct SpeedRow {
  std::size_t n = 0;
  double seconds_per_iteration = 0.0;
  double transforms_per_iteration = 0.0;
  /// Time ratio against the previous size; zero for the first row.
  double ratio = 0.0;
};

/// Per-iteration solver cost on synthetic n x n inputs, measured as the
/// difference between two fixed iteration budgets, best of `repeats`.
std::vector<SpeedRow> bench_speed(const std::vector<std::size_t>& sizes, Variant variant, std::uint64_t seed,
                                  std::size_t repeats = 5);
/// Doubling-ratio band [3.5, 6] and exactly 2 transforms per iteration.
SuiteReport complexity_suite(std::uint64_t seed);

/// Cyclic-shift recovery, zoom selection and perfect-prediction fixtures.
SuiteReport tracking_suite(std::uint64_t seed);

/// Names accepted by run_suite; "all" runs solver, kernel, convergence and metrics.
const std::vector<std::string>& suite_names();
std::vector<SuiteReport> run_suite(const std::string& name, std::uint64_t seed);

std::string format(const SuiteReport& report);

}  // namespace scf::verify
