// SPDX-License-Identifier: Apache-2.0
#include "scf/mscf.hpp"

#include <cmath>

#include "alternating.hpp"
#include "scf/spectral.hpp"

namespace scf {

std::vector<ComplexGrid> dft2_stack(const FeatureStack& x) {
  std::vector<ComplexGrid> out;
  out.reserve(x.channels());
  std::size_t l = 0;
  for (; l + 1 < x.channels(); l += 2) {
    auto [a, b] = spectral::dft2_pair(x[l], x[l + 1]);
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  if (l < x.channels()) out.push_back(spectral::dft2(x[l]));
  return out;
}

namespace {

void require_layout(const std::vector<ComplexGrid>& a, const std::vector<ComplexGrid>& b, const char* what) {
  if (a.empty() || a.size() != b.size()) {
    throw ShapeError(std::string(what) + ": channel count mismatch (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  }
  for (std::size_t l = 0; l < a.size(); ++l) require_same_shape(a[l], b[l], what);
}

ComplexGrid combine(const std::vector<ComplexGrid>& x_hat, const std::vector<ComplexGrid>& w_hat) {
  ComplexGrid out(x_hat.front().rows(), x_hat.front().cols());
  for (std::size_t l = 0; l < x_hat.size(); ++l) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += std::conj(x_hat[l][i]) * w_hat[l][i];
  }
  return out;
}

}  // namespace

RealGrid multichannel_response(const std::vector<ComplexGrid>& x_hat, const MultiFilter& filter) {
  require_layout(x_hat, filter.w_hat, "multichannel_response");
  RealGrid f = spectral::idft2(combine(x_hat, filter.w_hat));
  for (auto& v : f) v += filter.bias;
  return f;
}

std::vector<ComplexGrid> update_filter_mc(const std::vector<ComplexGrid>& x_hat, const ComplexGrid& p_hat,
                                          double C, double floor) {
  if (x_hat.empty()) throw ShapeError("update_filter_mc: no channels");
  if (!(C > 0.0)) throw ConfigError("update_filter_mc: C must be positive");
  for (const auto& xl : x_hat) require_same_shape(xl, p_hat, "update_filter_mc");
  const std::size_t n = p_hat.size();
  std::vector<ComplexGrid> w(x_hat.size(), ComplexGrid(p_hat.rows(), p_hat.cols()));
  for (std::size_t i = 0; i < n; ++i) {
    double energy = 0.0;
    for (const auto& xl : x_hat) energy += std::norm(xl[i]);
    double den = energy + 1.0 / C;
    if (den < floor) den = floor;
    const Complex scale = p_hat[i] / den;
    for (std::size_t l = 0; l < x_hat.size(); ++l) w[l][i] = x_hat[l][i] * scale;
  }
  return w;
}

double sherman_morrison_residual(const std::vector<ComplexGrid>& x_hat, const ComplexGrid& p_hat,
                                 const std::vector<ComplexGrid>& w_hat, double C) {
  require_layout(x_hat, w_hat, "sherman_morrison_residual");
  double worst = 0.0;
  for (std::size_t i = 0; i < p_hat.size(); ++i) {
    Complex xhw(0.0, 0.0);
    for (std::size_t l = 0; l < x_hat.size(); ++l) xhw += std::conj(x_hat[l][i]) * w_hat[l][i];
    double r2 = 0.0;
    for (std::size_t l = 0; l < x_hat.size(); ++l) {
      r2 += std::norm(x_hat[l][i] * xhw + w_hat[l][i] / C - x_hat[l][i] * p_hat[i]);
    }
    worst = std::max(worst, std::sqrt(r2) / (1.0 + std::abs(p_hat[i])));
  }
  return worst;
}

double mscf_objective(const std::vector<ComplexGrid>& x_hat, const MultiFilter& filter, const LabelGrid& y,
                      double C) {
  const RealGrid f = multichannel_response(x_hat, filter);
  double reg = 0.0;
  for (const auto& w : filter.w_hat) reg += squared_norm(w);
  return reg / static_cast<double>(f.size()) + C * detail::labeled_loss(y, f);
}

namespace {

class MultiModel {
 public:
  MultiModel(const std::vector<ComplexGrid>& x_hat, const SolverConfig& cfg, std::vector<ComplexGrid> w_hat,
             double bias)
      : x_hat_(x_hat), cfg_(cfg), w_hat_(std::move(w_hat)), bias_(bias) {}

  ComplexGrid combined() const { return combine(x_hat_, w_hat_); }
  double& bias() { return bias_; }
  double stationarity_sq(const ComplexGrid& s_hat) const {
    double acc = 0.0;
    for (std::size_t l = 0; l < x_hat_.size(); ++l) {
      for (std::size_t i = 0; i < s_hat.size(); ++i) {
        acc += std::norm(w_hat_[l][i] + cfg_.C * x_hat_[l][i] * s_hat[i]);
      }
    }
    return acc;
  }
  double regularizer() const {
    double reg = 0.0;
    for (const auto& w : w_hat_) reg += squared_norm(w);
    return reg / static_cast<double>(w_hat_.front().size());
  }
  void update(const ComplexGrid& p_hat) { w_hat_ = update_filter_mc(x_hat_, p_hat, cfg_.C, cfg_.floor); }
  std::size_t dimension() const {
    return w_hat_.size() * detail::packed_length(w_hat_.front().rows(), w_hat_.front().cols()) + 1;
  }
  void pack(Eigen::VectorXd& z) const {
    std::vector<const ComplexGrid*> ptrs;
    for (const auto& w : w_hat_) ptrs.push_back(&w);
    detail::pack_spectra(ptrs, bias_, z);
  }
  void unpack(const Eigen::VectorXd& z) {
    std::vector<ComplexGrid*> ptrs;
    for (auto& w : w_hat_) ptrs.push_back(&w);
    bias_ = detail::unpack_spectra(ptrs, z);
  }
  std::vector<double> spatial() const {
    std::vector<double> out;
    for (const auto& w_hat : w_hat_) {
      const RealGrid w = spectral::idft2(w_hat);
      out.insert(out.end(), w.begin(), w.end());
    }
    out.push_back(bias_);
    return out;
  }

  MultiFilter release(SolveReport report) { return {std::move(w_hat_), bias_, report}; }

 private:
  const std::vector<ComplexGrid>& x_hat_;
  const SolverConfig& cfg_;
  std::vector<ComplexGrid> w_hat_;
  double bias_;
};

}  // namespace

MultiFilter solve_mscf(const FeatureStack& x, const LabelGrid& y, const SolverConfig& cfg,
                       const MultiFilter* warm, SolveTrace* trace) {
  validate(cfg);
  if (x.channels() == 0) throw ShapeError("solve_mscf: empty feature stack");
  require_same_shape(x[0], y.values(), "solve_mscf");
  const std::vector<ComplexGrid> x_hat = dft2_stack(x);
  std::vector<ComplexGrid> w0(x.channels(), ComplexGrid(x.rows(), x.cols()));
  double b0 = 0.0;
  if (warm != nullptr) {
    require_layout(x_hat, warm->w_hat, "solve_mscf warm start");
    w0 = warm->w_hat;
    b0 = warm->bias;
  }
  MultiModel model(x_hat, cfg, std::move(w0), b0);
  const SolveReport report = detail::alternate(model, y, cfg, trace);
  return model.release(report);
}

}  // namespace scf
