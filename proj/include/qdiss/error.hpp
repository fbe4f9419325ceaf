#pragma once

#include <stdexcept>

namespace qdiss {

/// Malformed or inconsistent parameters (dimension mismatch, broken
/// symmetry, non-positive masses or temperature, unknown unit tag).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result
/// (eigen-solver failure, singular linear system, unstable drift where a
/// steady state is required).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdiss
