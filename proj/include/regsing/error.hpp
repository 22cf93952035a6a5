#pragma once

#include <stdexcept>
#include <string>

namespace regsing {

/// Invalid caller-supplied parameter (degree too small, non-prime modulus, gcd(p, d) != 1, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Shape mismatch, e.g. a determinant requested for a non-square matrix.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Value outside the domain of an operation, e.g. a residue >= p.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A size guard refused the computation. The message names the bound.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace regsing
