// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "scf/features.hpp"
#include "scf/scf_core.hpp"

namespace scf {

struct MultiFilter {
  std::vector<ComplexGrid> w_hat;
  double bias = 0.0;
  SolveReport report;
};

/// One spectrum per channel.
std::vector<ComplexGrid> dft2_stack(const FeatureStack& x);

/// f = idft2(sum_l conj(x_hat^l) * w_hat^l) + b.
RealGrid multichannel_response(const std::vector<ComplexGrid>& x_hat, const MultiFilter& filter);

/// Per frequency j: w_hat(j) = x_hat(j) p_hat(j) / (x_hat(j)^H x_hat(j) + 1/C).
std::vector<ComplexGrid> update_filter_mc(const std::vector<ComplexGrid>& x_hat,
                                          const ComplexGrid& p_hat, double C, double floor = 1e-12);

/// Worst per-frequency |(x x^H + I/C) w - x p| / (1 + |p|).
double sherman_morrison_residual(const std::vector<ComplexGrid>& x_hat, const ComplexGrid& p_hat,
                                 const std::vector<ComplexGrid>& w_hat, double C);

double mscf_objective(const std::vector<ComplexGrid>& x_hat, const MultiFilter& filter,
                      const LabelGrid& y, double C);

MultiFilter solve_mscf(const FeatureStack& x, const LabelGrid& y, const SolverConfig& cfg,
                       const MultiFilter* warm = nullptr, SolveTrace* trace = nullptr);

}  // namespace scf
