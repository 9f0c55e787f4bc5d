#pragma once

#include <stdexcept>
#include <string>

namespace liespin {

// Bad input values: non-finite numbers, wrong dimensions, non-Hermitian
// matrices, unnormalised states.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// log_principal at -identity, where no rotation axis is singled out.
class BranchUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Field vanishes or points along the z axis where the azimuth is undefined.
class DegenerateField : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation outside a tabulated time range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// cos(gamma/2) = 0 in the D factor.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A documented precondition (integrable field, valid gamma, ...) does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An internal invariant drifted beyond repair (e.g. group norm far from 1).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace liespin
