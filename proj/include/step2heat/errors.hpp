#pragma once

#include <stdexcept>
#include <string>

namespace step2heat {

/// A group description violated a structural invariant (non-skew matrix,
/// dependent matrices, dimension mismatch, malformed document).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine could not reach its accuracy target (truncation radius
/// too small, refinement budget exhausted, Kalman degeneracy, pole at source).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace step2heat
