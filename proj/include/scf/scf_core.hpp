// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "scf/grid.hpp"
#include "scf/labeling.hpp"

namespace scf {

struct SolverConfig {
  double C = 1e4;
  double eps = 1e-8;
  std::size_t max_iter = 100;
  double floor = 1e-12;
  /// Anderson mixing depth over the iterates; 0 runs the plain alternating updates.
  std::size_t anderson = 5;
};

void validate(const SolverConfig& cfg);

struct SolveReport {
  std::size_t iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

/// Per-evaluation record of a solve. Entry k describes iterate k: the slack it
/// induces (zero at discarded samples), its spatial weights followed by the
/// bias, its objective value and its stopping residual.
struct SolveTrace {
  std::vector<RealGrid> slack;
  std::vector<std::vector<double>> iterates;
  std::vector<double> objective;
  std::vector<double> residual;
};

struct SupportFilter {
  ComplexGrid w_hat;
  double bias = 0.0;
  SolveReport report;
};

/// Stopping residuals at a point (filter, e). r1 is the spatial weight
/// residual w + C * X^T s (infinity norm), r1_bias its bias component, r2 the
/// slack consistency over e > 0 and r3 the margin feasibility over e = 0.
struct Residuals {
  double r1_inf = 0.0;
  double r1_bias = 0.0;
  double r2_max = 0.0;
  double r3_max = 0.0;
  double max() const noexcept;
};

/// f = idft2(conj(x_hat) * w_hat) + b.
RealGrid response(const ComplexGrid& x_hat, const SupportFilter& filter);

/// d = y * f - 1 at labeled samples, 0 at discarded ones.
RealGrid margin_deficit(const ComplexGrid& x_hat, const SupportFilter& filter, const LabelGrid& y);

/// e = max(d, 0).
RealGrid update_slack(const RealGrid& d);

/// q = y * (1 + e) at labeled samples and the current response f elsewhere.
RealGrid imputed_target(const LabelGrid& y, const RealGrid& e, const RealGrid& f);

/// Bias of the joint (w, b) update: the mean of the imputed target over every sample.
double update_bias(const RealGrid& q);

/// w_hat = x_hat * p_hat / (|x_hat|^2 + 1/C), with p = q - b. The conjugated
/// numerator is kept only for comparison tests.
ComplexGrid update_filter(const ComplexGrid& x_hat, const ComplexGrid& p_hat, double C,
                          double floor = 1e-12, bool conjugate_numerator = false);

Residuals residuals(const ComplexGrid& x_hat, const SupportFilter& filter, const LabelGrid& y,
                    const RealGrid& e, double C);

/// ||w||^2 + C * sum over labeled samples of max(0, 1 - y f)^2.
double scf_objective(const ComplexGrid& x_hat, const SupportFilter& filter, const LabelGrid& y, double C);

/// Alternating minimisation from zero (or `warm`) until the residual is at
/// most eps or max_iter updates have run.
SupportFilter solve_scf(const RealGrid& x, const LabelGrid& y, const SolverConfig& cfg,
                        const SupportFilter* warm = nullptr, SolveTrace* trace = nullptr);

}  // namespace scf
