// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "scf/labeling.hpp"
#include "scf/scf_core.hpp"
#include "scf/spectral.hpp"

namespace scf::detail {

// Model requirements:
//   ComplexGrid combined() const;            spectrum of f - b
//   double& bias();
//   double stationarity_sq(const ComplexGrid& s_hat) const;
//   double regularizer() const;
//   void update(const ComplexGrid& p_hat);   coefficient update for target p
//   std::size_t dimension() const;           packed length, bias last
//   void pack(Eigen::VectorXd&) const; void unpack(const Eigen::VectorXd&);
//   std::vector<double> spatial() const;     weights then bias (trace only)

class AndersonMixer {
 public:
  explicit AndersonMixer(std::size_t depth) : depth_(depth) {}

  void reset() {
    dz_.clear();
    dg_.clear();
    gram_.resize(0, 0);
    has_prev_ = false;
  }

  // z: current iterate, g: its image under the fixed-point map. Returns the next iterate.
  // Least squares over the residual differences through their Gram matrix.
  Eigen::VectorXd mix(const Eigen::VectorXd& z, const Eigen::VectorXd& g) {
    if (depth_ == 0) return g;
    Eigen::VectorXd f = g - z;
    if (has_prev_) push(f - prev_f_, g - prev_g_);
    prev_f_ = std::move(f);
    prev_g_ = g;
    has_prev_ = true;
    if (dz_.empty()) return g;

    const auto m = static_cast<Eigen::Index>(dz_.size());
    Eigen::VectorXd rhs(m);
    for (Eigen::Index j = 0; j < m; ++j) rhs(j) = dz_[static_cast<std::size_t>(j)].dot(prev_f_);
    Eigen::MatrixXd lhs = gram_;
    lhs.diagonal().array() += 1e-10 * gram_.diagonal().maxCoeff();
    const Eigen::VectorXd gamma = lhs.colPivHouseholderQr().solve(rhs);
    if (!gamma.allFinite()) return g;
    Eigen::VectorXd next = g;
    for (Eigen::Index j = 0; j < m; ++j) next -= gamma(j) * dg_[static_cast<std::size_t>(j)];
    return next;
  }

 private:
  void push(Eigen::VectorXd dz, Eigen::VectorXd dg) {
    if (dz_.size() == depth_) {
      dz_.pop_front();
      dg_.pop_front();
      const auto k = gram_.rows() - 1;
      gram_ = gram_.bottomRightCorner(k, k).eval();
    }
    dz_.push_back(std::move(dz));
    dg_.push_back(std::move(dg));
    const auto m = static_cast<Eigen::Index>(dz_.size());
    gram_.conservativeResize(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double v = dz_[static_cast<std::size_t>(j)].dot(dz_.back());
      gram_(m - 1, j) = v;
      gram_(j, m - 1) = v;
    }
  }

  std::size_t depth_;
  std::deque<Eigen::VectorXd> dz_;
  std::deque<Eigen::VectorXd> dg_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd prev_f_;
  Eigen::VectorXd prev_g_;
  bool has_prev_ = false;
};

inline double labeled_loss(const LabelGrid& y, const RealGrid& f) {
  double loss = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (y[i] == 0.0) continue;
    const double xi = std::max(0.0, 1.0 - y[i] * f[i]);
    loss += xi * xi;
  }
  return loss;
}

template <class Model>
SolveReport alternate(Model& model, const LabelGrid& y, const SolverConfig& cfg, SolveTrace* trace) {
  const std::size_t rows = y.rows();
  const std::size_t cols = y.cols();
  const std::size_t n = y.size();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  AndersonMixer mixer(cfg.anderson);
  Eigen::VectorXd z(static_cast<Eigen::Index>(model.dimension()));
  Eigen::VectorXd g(z.size());
  RealGrid q(rows, cols);
  RealGrid s(rows, cols);
  RealGrid e(rows, cols);
  double best = std::numeric_limits<double>::infinity();

  SolveReport report;
  for (std::size_t k = 0;; ++k) {
    RealGrid f = spectral::idft2(model.combined());
    const double b = model.bias();
    double q_sum = 0.0;
    double s_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] += b;
      if (y[i] == 0.0) {
        q[i] = f[i];
        e[i] = 0.0;
      } else {
        e[i] = std::max(0.0, y[i] * f[i] - 1.0);
        q[i] = y[i] * (1.0 + e[i]);
      }
      s[i] = f[i] - q[i];
      q_sum += q[i];
      s_sum += s[i];
    }
    const double b_next = q_sum / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) q[i] -= b_next;
    auto [s_hat, p_hat] = spectral::dft2_pair(s, q);

    const double r1 = std::sqrt(model.stationarity_sq(s_hat)) * inv_sqrt_n;
    const double residual = std::max(r1, cfg.C * std::abs(s_sum));
    report.residual = residual;

    if (trace != nullptr) {
      trace->slack.push_back(e);
      trace->iterates.push_back(model.spatial());
      trace->objective.push_back(model.regularizer() + cfg.C * labeled_loss(y, f));
      trace->residual.push_back(residual);
    }
    if (k >= 1 && residual <= cfg.eps) {
      report.converged = true;
      break;
    }
    if (k == cfg.max_iter) break;

    if (residual > 10.0 * best) mixer.reset();
    best = std::min(best, residual);

    model.pack(z);
    model.update(p_hat);
    model.bias() = b_next;
    if (cfg.anderson > 0) {
      model.pack(g);
      model.unpack(mixer.mix(z, g));
    }
    ++report.iterations;
  }
  return report;
}

// Spectra of real signals are packed over the half plane c <= cols / 2 (real
// and imaginary parts), followed by `extra`. Unpacking restores the mirror
// half as conjugates, so mixed iterates stay conjugate-symmetric.
inline std::size_t packed_length(std::size_t rows, std::size_t cols) { return 2 * rows * (cols / 2 + 1); }

inline void pack_spectra(const std::vector<const ComplexGrid*>& spectra, double extra, Eigen::VectorXd& out) {
  Eigen::Index k = 0;
  for (const ComplexGrid* g : spectra) {
    for (std::size_t r = 0; r < g->rows(); ++r) {
      for (std::size_t c = 0; c <= g->cols() / 2; ++c) {
        const Complex v = (*g)(r, c);
        out(k++) = v.real();
        out(k++) = v.imag();
      }
    }
  }
  out(k) = extra;
}

inline double unpack_spectra(const std::vector<ComplexGrid*>& spectra, const Eigen::VectorXd& in) {
  Eigen::Index k = 0;
  for (ComplexGrid* g : spectra) {
    const std::size_t rows = g->rows();
    const std::size_t cols = g->cols();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c <= cols / 2; ++c) {
        const std::size_t nr = (rows - r) % rows;
        const std::size_t nc = (cols - c) % cols;
        const Complex v(in(k), in(k + 1));
        k += 2;
        if (nr == r && nc == c) {
          (*g)(r, c) = Complex(v.real(), 0.0);
        } else {
          (*g)(r, c) = v;
          (*g)(nr, nc) = std::conj(v);
        }
      }
    }
  }
  return in(k);
}

}  // namespace scf::detail
