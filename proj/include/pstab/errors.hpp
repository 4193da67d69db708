#pragma once

#include <stdexcept>
#include <string>

namespace pstab {

/// Precondition violation on an argument (dimension, range, malformed index set).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an operation needs an invertible matrix. The determinant
/// evidence is always zero; it is carried so callers can report it.
class SingularMatrixError : public std::domain_error {
 public:
  explicit SingularMatrixError(const std::string& what)
      : std::domain_error(what + " (determinant = 0)") {}
};

/// Floating-point backend failure: non-convergence or a broken consistency check.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pstab
