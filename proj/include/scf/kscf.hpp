// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "scf/features.hpp"
#include "scf/scf_core.hpp"

namespace scf {

struct KernelSpec {
  enum class Kind { linear, polynomial, gaussian };
  Kind kind = Kind::gaussian;
  double sigma = 0.2;
  int degree = 2;

  static KernelSpec linear() { return {Kind::linear, 0.2, 2}; }
  static KernelSpec polynomial(int degree) { return {Kind::polynomial, 0.2, degree}; }
  static KernelSpec gaussian(double sigma) { return {Kind::gaussian, sigma, 2}; }
};

void validate(const KernelSpec& spec);
KernelSpec::Kind parse_kernel(const std::string& name);
std::string to_string(KernelSpec::Kind kind);

/// K(a, b) evaluated directly on two equally shaped stacks.
double kernel_value(const FeatureStack& a, const FeatureStack& b, const KernelSpec& spec);

/// k(u, v) = K(x, z translated by +(u, v)) for every cyclic translation.
RealGrid kernel_correlation(const FeatureStack& x, const FeatureStack& z, const KernelSpec& spec);

struct DualFilter {
  ComplexGrid alpha_hat;
  double bias = 0.0;
  FeatureStack templ;
  SolveReport report;
};

/// alpha^T K alpha + C * sum over labeled samples of max(0, 1 - y f)^2 with
/// f = idft2(k_hat * alpha_hat) + b.
double kscf_objective(const ComplexGrid& k_hat, const ComplexGrid& alpha_hat, double bias,
                      const LabelGrid& y, double C);

DualFilter solve_kscf(const FeatureStack& x, const LabelGrid& y, const KernelSpec& spec,
                      const SolverConfig& cfg, const DualFilter* warm = nullptr,
                      SolveTrace* trace = nullptr);

/// idft2(k_hat^{template, z} * alpha_hat) + b.
RealGrid kernel_response(const DualFilter& filter, const FeatureStack& z, const KernelSpec& spec);

}  // namespace scf
