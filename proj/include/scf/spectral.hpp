// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>

#include "scf/grid.hpp"

/// 2D discrete Fourier transforms and elementwise spectral algebra.
///
/// Conventions used throughout the library:
///   * forward transforms are unnormalised, inverse transforms scale by 1/(rows*cols);
///   * a sample "translated by +(u, v)" is s(i, j) = x(i - u, j - v) with wrap-around,
///     and cross_correlate(a, b)(u, v) = sum a(i, j) * b(i + u, j + v) is the inner
///     product of b with a translated by +(u, v).
namespace scf::spectral {

/// Unnormalised forward 2D DFT of a real grid.
ComplexGrid dft2(const RealGrid& g);
ComplexGrid dft2(const ComplexGrid& g);

/// Inverse 2D DFT returning the real part. Throws SymmetryError when the
/// imaginary residue exceeds 1e-8 of the output norm.
RealGrid idft2(const ComplexGrid& spectrum);

/// Inverse 2D DFT keeping the complex result.
ComplexGrid idft2_complex(const ComplexGrid& spectrum);

/// Spectra of two real grids computed with a single complex transform.
std::pair<ComplexGrid, ComplexGrid> dft2_pair(const RealGrid& a, const RealGrid& b);

/// out(u, v) = sum_{i,j} a(i, j) * b(i + u, j + v), computed as idft2(conj(A) * B).
RealGrid cross_correlate(const RealGrid& a, const RealGrid& b);

ComplexGrid multiply(const ComplexGrid& a, const ComplexGrid& b);
ComplexGrid conj(const ComplexGrid& a);

/// num / den elementwise; any |den| below `floor` is pushed out to magnitude
/// `floor` along its own phase (zero becomes +floor).
ComplexGrid divide_guarded(const ComplexGrid& num, const ComplexGrid& den, double floor);

/// Number of forward and inverse transforms executed on the calling thread.
std::uint64_t transform_count() noexcept;

}  // namespace scf::spectral
