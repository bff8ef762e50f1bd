#pragma once

#include <stdexcept>
#include <string>

namespace oamq {

// Requested Fock cutoff cannot hold the state at the requested tolerance.
struct CutoffError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No cutoff below the hard ceiling meets the requested tolerance.
struct InfeasibleToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Target has no representative in the probe family (e.g. fractional Fock N).
struct NotRepresentableError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Root bracketing failed below the parameter ceiling.
struct InfeasibleTargetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix is singular or not positive definite.
struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter outside its stated domain.
struct InvalidParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace oamq
