// SPDX-License-Identifier: Apache-2.0
#include "scf/kscf.hpp"

#include <cmath>

#include "alternating.hpp"
#include "scf/spectral.hpp"

namespace scf {

void validate(const KernelSpec& spec) {
  if (spec.kind == KernelSpec::Kind::gaussian && !(spec.sigma > 0.0)) {
    throw ConfigError("gaussian kernel needs sigma > 0");
  }
  if (spec.kind == KernelSpec::Kind::polynomial && spec.degree < 1) {
    throw ConfigError("polynomial kernel needs degree >= 1");
  }
}

KernelSpec::Kind parse_kernel(const std::string& name) {
  if (name == "linear") return KernelSpec::Kind::linear;
  if (name == "polynomial" || name == "poly") return KernelSpec::Kind::polynomial;
  if (name == "gaussian") return KernelSpec::Kind::gaussian;
  throw ConfigError("unknown kernel '" + name + "' (expected linear, polynomial, gaussian)");
}

std::string to_string(KernelSpec::Kind kind) {
  switch (kind) {
    case KernelSpec::Kind::linear: return "linear";
    case KernelSpec::Kind::polynomial: return "polynomial";
    case KernelSpec::Kind::gaussian: return "gaussian";
  }
  return "linear";
}

namespace {

void require_match(const FeatureStack& a, const FeatureStack& b, const char* what) {
  if (!a.same_layout(b) || a.channels() == 0) {
    throw ShapeError(std::string(what) + ": feature stacks differ (" + std::to_string(a.channels()) + "x" +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.channels()) + "x" + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
}

double apply_kernel(double dot, double sq_dist, double dim, const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelSpec::Kind::linear: return dot / dim;
    case KernelSpec::Kind::polynomial: return std::pow(dot / dim + 1.0, spec.degree);
    case KernelSpec::Kind::gaussian:
      return std::exp(-std::max(0.0, sq_dist) / (spec.sigma * spec.sigma * dim));
  }
  return 0.0;
}

double stack_norm_sq(const FeatureStack& x) {
  double acc = 0.0;
  for (const auto& ch : x) acc += squared_norm(ch);
  return acc;
}

}  // namespace

double kernel_value(const FeatureStack& a, const FeatureStack& b, const KernelSpec& spec) {
  validate(spec);
  require_match(a, b, "kernel_value");
  double dot = 0.0;
  double dist = 0.0;
  for (std::size_t l = 0; l < a.channels(); ++l) {
    for (std::size_t i = 0; i < a[l].size(); ++i) {
      dot += a[l][i] * b[l][i];
      const double d = a[l][i] - b[l][i];
      dist += d * d;
    }
  }
  return apply_kernel(dot, dist, static_cast<double>(a.element_count()), spec);
}

RealGrid kernel_correlation(const FeatureStack& x, const FeatureStack& z, const KernelSpec& spec) {
  validate(spec);
  require_match(x, z, "kernel_correlation");
  ComplexGrid acc(x.rows(), x.cols());
  for (std::size_t l = 0; l < x.channels(); ++l) {
    const auto [z_hat, x_hat] = spectral::dft2_pair(z[l], x[l]);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::conj(z_hat[i]) * x_hat[i];
  }
  RealGrid k = spectral::idft2(acc);
  const double xx = stack_norm_sq(x);
  const double zz = stack_norm_sq(z);
  const double dim = static_cast<double>(x.element_count());
  for (auto& v : k) v = apply_kernel(v, xx + zz - 2.0 * v, dim, spec);
  return k;
}

double kscf_objective(const ComplexGrid& k_hat, const ComplexGrid& alpha_hat, double bias, const LabelGrid& y,
                      double C) {
  require_same_shape(k_hat, alpha_hat, "kscf_objective");
  ComplexGrid prod(k_hat.rows(), k_hat.cols());
  double reg = 0.0;
  for (std::size_t i = 0; i < prod.size(); ++i) {
    prod[i] = k_hat[i] * alpha_hat[i];
    reg += std::norm(alpha_hat[i]) * k_hat[i].real();
  }
  RealGrid f = spectral::idft2(prod);
  for (auto& v : f) v += bias;
  return reg / static_cast<double>(prod.size()) + C * detail::labeled_loss(y, f);
}

namespace {

class DualModel {
 public:
  DualModel(const ComplexGrid& k_hat, const SolverConfig& cfg, ComplexGrid alpha_hat, double bias)
      : k_hat_(k_hat), cfg_(cfg), alpha_hat_(std::move(alpha_hat)), bias_(bias) {}

  ComplexGrid combined() const { return spectral::multiply(k_hat_, alpha_hat_); }
  double& bias() { return bias_; }
  double stationarity_sq(const ComplexGrid& s_hat) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < s_hat.size(); ++i) acc += std::norm(alpha_hat_[i] + cfg_.C * s_hat[i]);
    return acc;
  }
  double regularizer() const {
    double reg = 0.0;
    for (std::size_t i = 0; i < alpha_hat_.size(); ++i) reg += std::norm(alpha_hat_[i]) * k_hat_[i].real();
    return reg / static_cast<double>(alpha_hat_.size());
  }
  void update(const ComplexGrid& p_hat) {
    ComplexGrid den(k_hat_.rows(), k_hat_.cols());
    for (std::size_t i = 0; i < den.size(); ++i) den[i] = k_hat_[i] + 1.0 / cfg_.C;
    alpha_hat_ = spectral::divide_guarded(p_hat, den, cfg_.floor);
  }
  std::size_t dimension() const { return detail::packed_length(alpha_hat_.rows(), alpha_hat_.cols()) + 1; }
  void pack(Eigen::VectorXd& z) const { detail::pack_spectra({&alpha_hat_}, bias_, z); }
  void unpack(const Eigen::VectorXd& z) { bias_ = detail::unpack_spectra({&alpha_hat_}, z); }
  std::vector<double> spatial() const {
    const RealGrid a = spectral::idft2(alpha_hat_);
    std::vector<double> out(a.begin(), a.end());
    out.push_back(bias_);
    return out;
  }

  ComplexGrid& alpha_hat() { return alpha_hat_; }
  double bias_value() const { return bias_; }

 private:
  const ComplexGrid& k_hat_;
  const SolverConfig& cfg_;
  ComplexGrid alpha_hat_;
  double bias_;
};

}  // namespace

DualFilter solve_kscf(const FeatureStack& x, const LabelGrid& y, const KernelSpec& spec, const SolverConfig& cfg,
                      const DualFilter* warm, SolveTrace* trace) {
  validate(cfg);
  validate(spec);
  if (x.channels() == 0) throw ShapeError("solve_kscf: empty feature stack");
  require_same_shape(x[0], y.values(), "solve_kscf");
  const ComplexGrid k_hat = spectral::dft2(kernel_correlation(x, x, spec));
  ComplexGrid a0(x.rows(), x.cols());
  double b0 = 0.0;
  if (warm != nullptr) {
    require_same_shape(a0, warm->alpha_hat, "solve_kscf warm start");
    a0 = warm->alpha_hat;
    b0 = warm->bias;
  }
  DualModel model(k_hat, cfg, std::move(a0), b0);
  const SolveReport report = detail::alternate(model, y, cfg, trace);
  return {std::move(model.alpha_hat()), model.bias_value(), x, report};
}

RealGrid kernel_response(const DualFilter& filter, const FeatureStack& z, const KernelSpec& spec) {
  require_match(filter.templ, z, "kernel_response");
  const ComplexGrid k_hat = spectral::dft2(kernel_correlation(filter.templ, z, spec));
  RealGrid f = spectral::idft2(spectral::multiply(k_hat, filter.alpha_hat));
  for (auto& v : f) v += filter.bias;
  return f;
}

}  // namespace scf
