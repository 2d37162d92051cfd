// SPDX-License-Identifier: Apache-2.0
#include "scf/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>

namespace scf::spectral {
namespace {

thread_local std::uint64_t g_transforms = 0;

// Plans are created once per (shape, direction) and executed with the new-array
// interface, which FFTW documents as thread-safe. Only planning takes the lock.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard lock(mutex_);
    const Key key{rows, cols, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(rows * cols);
    auto* out = fftw_alloc_complex(rows * cols);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), in, out,
                                      sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw Error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  struct Key {
    std::size_t rows, cols;
    int sign;
    auto operator<=>(const Key&) const = default;
  };
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void execute(const ComplexGrid& in, ComplexGrid& out, int sign) {
  fftw_plan plan = plans().get(in.rows(), in.cols(), sign);
  // fftw_execute_dft never writes to the input of an out-of-place plan.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
  ++g_transforms;
}

ComplexGrid to_complex(const RealGrid& g) {
  ComplexGrid c(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.size(); ++i) c[i] = Complex(g[i], 0.0);
  return c;
}

}  // namespace

ComplexGrid dft2(const RealGrid& g) { return dft2(to_complex(g)); }

ComplexGrid dft2(const ComplexGrid& g) {
  ComplexGrid out(g.rows(), g.cols());
  execute(g, out, FFTW_FORWARD);
  return out;
}

ComplexGrid idft2_complex(const ComplexGrid& spectrum) {
  ComplexGrid out(spectrum.rows(), spectrum.cols());
  execute(spectrum, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (auto& v : out) v *= scale;
  return out;
}

RealGrid idft2(const ComplexGrid& spectrum) {
  const ComplexGrid c = idft2_complex(spectrum);
  RealGrid out(c.rows(), c.cols());
  double real_sq = 0.0;
  double imag_sq = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = c[i].real();
    real_sq += c[i].real() * c[i].real();
    imag_sq += c[i].imag() * c[i].imag();
  }
  if (std::sqrt(imag_sq) > 1e-8 * std::sqrt(real_sq + imag_sq)) {
    throw SymmetryError("idft2: spectrum is not conjugate-symmetric (imaginary residue " +
                        std::to_string(std::sqrt(imag_sq)) + ", real norm " +
                        std::to_string(std::sqrt(real_sq)) + ")");
  }
  return out;
}

std::pair<ComplexGrid, ComplexGrid> dft2_pair(const RealGrid& a, const RealGrid& b) {
  require_same_shape(a, b, "dft2_pair");
  ComplexGrid packed(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) packed[i] = Complex(a[i], b[i]);
  const ComplexGrid z = dft2(packed);
  // Z = A + iB with A, B Hermitian: A(k) = (Z(k) + conj(Z(-k))) / 2, B(k) = (Z(k) - conj(Z(-k))) / 2i.
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  ComplexGrid fa(rows, cols);
  ComplexGrid fb(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t nr = (rows - r) % rows;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t nc = (cols - c) % cols;
      const Complex zk = z(r, c);
      const Complex zm = std::conj(z(nr, nc));
      fa(r, c) = 0.5 * (zk + zm);
      fb(r, c) = Complex(0.0, -0.5) * (zk - zm);
    }
  }
  return {std::move(fa), std::move(fb)};
}

RealGrid cross_correlate(const RealGrid& a, const RealGrid& b) {
  require_same_shape(a, b, "cross_correlate");
  auto [fa, fb] = dft2_pair(a, b);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = std::conj(fa[i]) * fb[i];
  return idft2(fa);
}

ComplexGrid multiply(const ComplexGrid& a, const ComplexGrid& b) {
  require_same_shape(a, b, "multiply");
  ComplexGrid out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

ComplexGrid conj(const ComplexGrid& a) {
  ComplexGrid out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]);
  return out;
}

ComplexGrid divide_guarded(const ComplexGrid& num, const ComplexGrid& den, double floor) {
  require_same_shape(num, den, "divide_guarded");
  if (!(floor > 0.0)) throw ConfigError("divide_guarded: floor must be positive");
  ComplexGrid out(num.rows(), num.cols());
  for (std::size_t i = 0; i < num.size(); ++i) {
    Complex d = den[i];
    if (const double mag = std::abs(d); mag < floor) d = mag > 0.0 ? d * (floor / mag) : Complex(floor);
    out[i] = num[i] / d;
  }
  return out;
}

std::uint64_t transform_count() noexcept { return g_transforms; }

}  // namespace scf::spectral
