#pragma once

#include <stdexcept>
#include <string>

namespace rmap {

// Argument outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation past the range a solution was built for.
class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Requested accuracy could not be certified (quadrature, inversion, DDE steps).
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inversion method incompatible with the transform's growth.
class MethodMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rejection sampling ran out of attempts.
class BudgetExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmap
