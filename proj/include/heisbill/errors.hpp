#pragma once

#include <stdexcept>
#include <string>

namespace heis {

// Every domain failure raised by the library derives from Error, so callers
// can separate domain conditions from programming errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotUnitError : public Error {
 public:
  NotUnitError() : Error("state momentum is not unit: b^2 + c^2 != 1") {}
};

class NotOnBoundaryError : public Error {
 public:
  explicit NotOnBoundaryError(double distance)
      : Error("point is not on the table boundary (signed distance " +
              std::to_string(distance) + ")"),
        distance(distance) {}
  double distance;
};

class StartsOutsideError : public Error {
 public:
  StartsOutsideError() : Error("start state is outside the table or points outward") {}
};

class NoSolutionError : public Error {
 public:
  using Error::Error;
};

class DegenerateChordError : public Error {
 public:
  DegenerateChordError() : Error("endpoints coincide: zero chord and zero height change") {}
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class NotCoprimeError : public Error {
 public:
  NotCoprimeError(int n, int m)
      : Error("n=" + std::to_string(n) + " and m=" + std::to_string(m) + " are not coprime") {}
};

class BelowThresholdError : public Error {
 public:
  BelowThresholdError(double value, double threshold)
      : Error("psi=" + std::to_string(value) + " is below the admissibility threshold"),
        value(value),
        threshold(threshold) {}
  double value;
  double threshold;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

class WrongTableError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace heis
