#pragma once

#include <stdexcept>
#include <string>

namespace qmc {

/// Malformed input: bad graph files, invalid generator parameters, bad flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on numerical data was violated (e.g. a Gram matrix that is
/// not PSD to tolerance, or a corrupt vector solution).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmc
