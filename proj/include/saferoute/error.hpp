#pragma once

#include <stdexcept>
#include <string>

namespace saferoute {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A time profile holds a value outside its admissible range (e.g. speed <= 0).
class InvalidProfile : public Error {
 public:
  using Error::Error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

// Queueing: density at or beyond jam density.
class SaturationError : public Error {
 public:
  using Error::Error;
};

// Queueing: argument outside the function's domain (negative flow, F > F_max).
class DomainError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

// No feasible discretized schedule exists for a fixed route.
class ScheduleInfeasible : public Error {
 public:
  using Error::Error;
};

// Enumeration stopped because it would exceed its budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Instance too large for exhaustive enumeration.
class OracleRefusal : public Error {
 public:
  using Error::Error;
};

}  // namespace saferoute
