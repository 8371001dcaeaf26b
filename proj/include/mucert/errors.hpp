#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mucert {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Rejected input values (non-finite entries, invalid p, bad weights, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A trajectory left the vector field's domain box.
class DomainEscapeError : public Error {
 public:
  DomainEscapeError(const std::string& what, double escape_time)
      : Error(what), escape_time(escape_time) {}
  double escape_time;
};

/// An h-quotient trace violated the guaranteed monotone decrease.
class TraceError : public Error {
 public:
  TraceError(const std::string& what, std::vector<std::pair<double, double>> trace)
      : Error(what), h_trace(std::move(trace)) {}
  std::vector<std::pair<double, double>> h_trace;
};

/// Certification was refused because the measured rate is not negative.
class CertificationRefused : public Error {
 public:
  CertificationRefused(const std::string& what, std::vector<double> argmax, double rate)
      : Error(what), argmax_point(std::move(argmax)), rate(rate) {}
  std::vector<double> argmax_point;
  double rate;
};

}  // namespace mucert
