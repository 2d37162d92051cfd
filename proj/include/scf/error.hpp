// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace scf {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands whose shapes (or channel counts) do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters: non-positive scales, bad thresholds, degenerate boxes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An inverse transform whose input was not conjugate-symmetric enough to
/// yield a real grid. Always signals a bug upstream.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Missing or malformed files (datasets, lookup tables, run files).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Dense oracle refused the problem or failed to converge.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace scf
