#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: unnormalised densities, mismatched grids, out-of-range params.
struct ValidationError : Error {
  using Error::Error;
};

// No density can meet the requested constraint (e.g. budget below inf r).
struct InfeasibleError : Error {
  using Error::Error;
};

// The dual search could not bracket a root inside the configured range.
struct BracketError : Error {
  using Error::Error;
};

// A set / block / process could not be built under the configured budgets.
struct ConstructionError : Error {
  using Error::Error;
};

struct SamplingError : Error {
  using Error::Error;
};

struct InstabilityError : Error {
  using Error::Error;
};

// Raised by quantize() when the parametric tail outside the grid is too fat.
struct TailMassError : ValidationError {
  TailMassError(const std::string& what, double lost)
      : ValidationError(what), lost_mass(lost) {}
  double lost_mass;
};

}  // namespace renyi
