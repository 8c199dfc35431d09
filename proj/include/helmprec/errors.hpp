#pragma once

#include <stdexcept>
#include <string>

namespace helmprec {

// Argument and guard violations are reported with std::invalid_argument.
// The classes below cover numerical failures that are not caller mistakes.

/// Media fields that break the absorbing-layer constraint (c = c_o on supp zeta).
class InvalidMedia : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symbol denominator vanished: omega^2 + i omega a - c^2 |xi|^2 == 0.
class SingularSymbol : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense operator with an (numerically) zero eigenvalue.
class SingularOperator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied linear map produced non-finite output.
class OperatorFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace helmprec
