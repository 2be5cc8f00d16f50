#pragma once

#include <stdexcept>

namespace plab {

// Raised when an iterative numeric routine (quadrature refinement, tail
// series, Monte Carlo sanity limits) fails to reach its tolerance.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace plab
