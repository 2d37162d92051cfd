// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scf/error.hpp"

namespace scf {

/// Dense 2D array in row-major order. Spatial quantities (samples, labels,
/// responses) live in Grid<double>, their spectra in Grid<complex<double>>.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw ShapeError("grid dimensions must be positive");
  }
  Grid(std::size_t rows, std::size_t cols, std::vector<T> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows == 0 || cols == 0) throw ShapeError("grid dimensions must be positive");
    if (values_.size() != rows * cols) throw ShapeError("grid value count does not match shape");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  T* data() noexcept { return values_.data(); }
  const T* data() const noexcept { return values_.data(); }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool same_shape(const Grid& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  Grid& operator+=(const Grid& o) {
    require_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Grid& operator-=(const Grid& o) {
    require_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  template <typename S>
  Grid& operator*=(S s) {
    for (auto& v : values_) v *= s;
    return *this;
  }

  friend Grid operator+(Grid a, const Grid& b) { return a += b; }
  friend Grid operator-(Grid a, const Grid& b) { return a -= b; }
  template <typename S>
  friend Grid operator*(S s, Grid a) {
    return a *= s;
  }

  bool operator==(const Grid& o) const = default;

 private:
  void require_same(const Grid& o) const {
    if (!same_shape(o)) throw ShapeError("grid shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> values_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;
using Complex = std::complex<double>;

inline void require_same_shape(std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2,
                               const char* what) {
  if (r1 != r2 || c1 != c2) {
    throw ShapeError(std::string(what) + ": shape mismatch (" + std::to_string(r1) + "x" +
                     std::to_string(c1) + " vs " + std::to_string(r2) + "x" +
                     std::to_string(c2) + ")");
  }
}

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  require_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), what);
}

inline double max_abs(const RealGrid& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

inline double squared_norm(const RealGrid& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return s;
}

inline double squared_norm(const ComplexGrid& g) {
  double s = 0.0;
  for (const auto& v : g) s += std::norm(v);
  return s;
}

inline double sum(const RealGrid& g) {
  double s = 0.0;
  for (double v : g) s += v;
  return s;
}

inline double mean(const RealGrid& g) { return sum(g) / static_cast<double>(g.size()); }

inline bool all_finite(const RealGrid& g) {
  return std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); });
}

/// Cyclic shift: out(i, j) = g(i - dr, j - dc), i.e. content moves by +(dr, dc).
template <typename T>
Grid<T> circshift(const Grid<T>& g, long dr, long dc) {
  Grid<T> out(g.rows(), g.cols());
  const long rows = static_cast<long>(g.rows());
  const long cols = static_cast<long>(g.cols());
  for (long r = 0; r < rows; ++r) {
    const long sr = (((r - dr) % rows) + rows) % rows;
    for (long c = 0; c < cols; ++c) {
      const long sc = (((c - dc) % cols) + cols) % cols;
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
          g(static_cast<std::size_t>(sr), static_cast<std::size_t>(sc));
    }
  }
  return out;
}

}  // namespace scf
