// SPDX-License-Identifier: Apache-2.0
#include "scf/scf_core.hpp"

#include <cmath>

#include "alternating.hpp"
#include "scf/spectral.hpp"

namespace scf {

void validate(const SolverConfig& cfg) {
  if (!(cfg.C > 0.0) || !std::isfinite(cfg.C)) throw ConfigError("solver: C must be positive and finite");
  if (!(cfg.eps > 0.0)) throw ConfigError("solver: eps must be positive");
  if (cfg.max_iter < 1) throw ConfigError("solver: max_iter must be at least 1");
  if (!(cfg.floor > 0.0)) throw ConfigError("solver: division floor must be positive");
}

double Residuals::max() const noexcept { return std::max({r1_inf, r1_bias, r2_max, r3_max}); }

RealGrid response(const ComplexGrid& x_hat, const SupportFilter& filter) {
  require_same_shape(x_hat, filter.w_hat, "response");
  ComplexGrid prod(x_hat.rows(), x_hat.cols());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(x_hat[i]) * filter.w_hat[i];
  RealGrid f = spectral::idft2(prod);
  for (auto& v : f) v += filter.bias;
  return f;
}

RealGrid margin_deficit(const ComplexGrid& x_hat, const SupportFilter& filter, const LabelGrid& y) {
  require_same_shape(x_hat, y.values(), "margin_deficit");
  RealGrid d = response(x_hat, filter);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = y[i] == 0.0 ? 0.0 : y[i] * d[i] - 1.0;
  return d;
}

RealGrid update_slack(const RealGrid& d) {
  RealGrid e = d;
  for (auto& v : e) v = std::max(v, 0.0);
  return e;
}

RealGrid imputed_target(const LabelGrid& y, const RealGrid& e, const RealGrid& f) {
  require_same_shape(y.values(), e, "imputed_target");
  require_same_shape(y.values(), f, "imputed_target");
  RealGrid q(f.rows(), f.cols());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = y[i] == 0.0 ? f[i] : y[i] * (1.0 + e[i]);
  return q;
}

double update_bias(const RealGrid& q) { return mean(q); }

ComplexGrid update_filter(const ComplexGrid& x_hat, const ComplexGrid& p_hat, double C, double floor,
                          bool conjugate_numerator) {
  require_same_shape(x_hat, p_hat, "update_filter");
  if (!(C > 0.0)) throw ConfigError("update_filter: C must be positive");
  ComplexGrid num(x_hat.rows(), x_hat.cols());
  ComplexGrid den(x_hat.rows(), x_hat.cols());
  for (std::size_t i = 0; i < num.size(); ++i) {
    num[i] = (conjugate_numerator ? std::conj(x_hat[i]) : x_hat[i]) * p_hat[i];
    den[i] = std::norm(x_hat[i]) + 1.0 / C;
  }
  return spectral::divide_guarded(num, den, floor);
}

Residuals residuals(const ComplexGrid& x_hat, const SupportFilter& filter, const LabelGrid& y,
                    const RealGrid& e, double C) {
  require_same_shape(x_hat, e, "residuals");
  const RealGrid f = response(x_hat, filter);
  const RealGrid q = imputed_target(y, e, f);
  Residuals r;
  RealGrid s = f - q;
  r.r1_bias = C * std::abs(sum(s));
  const ComplexGrid s_hat = spectral::dft2(s);
  ComplexGrid g(x_hat.rows(), x_hat.cols());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = filter.w_hat[i] + C * x_hat[i] * s_hat[i];
  r.r1_inf = max_abs(spectral::idft2(g));
  r.r2_max = 0.0;
  r.r3_max = -std::numeric_limits<double>::infinity();
  bool any_tight = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (y[i] == 0.0) continue;
    const double margin = y[i] * f[i];
    if (e[i] > 0.0) {
      r.r2_max = std::max(r.r2_max, std::abs(e[i] + 1.0 - margin));
    } else {
      r.r3_max = std::max(r.r3_max, margin - 1.0);
      any_tight = true;
    }
  }
  if (!any_tight) r.r3_max = 0.0;
  return r;
}

double scf_objective(const ComplexGrid& x_hat, const SupportFilter& filter, const LabelGrid& y, double C) {
  const RealGrid f = response(x_hat, filter);
  return squared_norm(filter.w_hat) / static_cast<double>(filter.w_hat.size()) +
         C * detail::labeled_loss(y, f);
}

namespace {

class PrimalModel {
 public:
  PrimalModel(const ComplexGrid& x_hat, const SolverConfig& cfg, ComplexGrid w_hat, double bias)
      : x_hat_(x_hat), cfg_(cfg), w_hat_(std::move(w_hat)), bias_(bias) {}

  ComplexGrid combined() const {
    ComplexGrid out(x_hat_.rows(), x_hat_.cols());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(x_hat_[i]) * w_hat_[i];
    return out;
  }
  double& bias() { return bias_; }
  double stationarity_sq(const ComplexGrid& s_hat) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < s_hat.size(); ++i) acc += std::norm(w_hat_[i] + cfg_.C * x_hat_[i] * s_hat[i]);
    return acc;
  }
  double regularizer() const { return squared_norm(w_hat_) / static_cast<double>(w_hat_.size()); }
  void update(const ComplexGrid& p_hat) { w_hat_ = update_filter(x_hat_, p_hat, cfg_.C, cfg_.floor); }
  std::size_t dimension() const { return detail::packed_length(w_hat_.rows(), w_hat_.cols()) + 1; }
  void pack(Eigen::VectorXd& z) const { detail::pack_spectra({&w_hat_}, bias_, z); }
  void unpack(const Eigen::VectorXd& z) { bias_ = detail::unpack_spectra({&w_hat_}, z); }
  std::vector<double> spatial() const {
    const RealGrid w = spectral::idft2(w_hat_);
    std::vector<double> out(w.begin(), w.end());
    out.push_back(bias_);
    return out;
  }

  SupportFilter release(SolveReport report) { return {std::move(w_hat_), bias_, report}; }

 private:
  const ComplexGrid& x_hat_;
  const SolverConfig& cfg_;
  ComplexGrid w_hat_;
  double bias_;
};

}  // namespace

SupportFilter solve_scf(const RealGrid& x, const LabelGrid& y, const SolverConfig& cfg,
                        const SupportFilter* warm, SolveTrace* trace) {
  validate(cfg);
  require_same_shape(x, y.values(), "solve_scf");
  const ComplexGrid x_hat = spectral::dft2(x);
  ComplexGrid w0(x.rows(), x.cols());
  double b0 = 0.0;
  if (warm != nullptr) {
    require_same_shape(x, warm->w_hat, "solve_scf warm start");
    w0 = warm->w_hat;
    b0 = warm->bias;
  }
  PrimalModel model(x_hat, cfg, std::move(w0), b0);
  const SolveReport report = detail::alternate(model, y, cfg, trace);
  return model.release(report);
}

}  // namespace scf
