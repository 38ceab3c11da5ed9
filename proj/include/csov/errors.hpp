#pragma once

#include <stdexcept>
#include <string>

namespace csov {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// quadrature budget exhausted
struct NonConvergence : Error {
  using Error::Error;
};

struct PoleOutsideInterval : Error {
  using Error::Error;
};

struct PoleOfGamma : Error {
  using Error::Error;
};

struct DividesByZeroD : Error {
  using Error::Error;
};

struct DegenerateEnergies : Error {
  using Error::Error;
};

struct DegenerateMomenta : Error {
  using Error::Error;
};

struct GridTooCoarse : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct InvariantFailure : Error {
  using Error::Error;
};

}  // namespace csov
