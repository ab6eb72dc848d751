#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "nostcap/types.hpp"

namespace nostcap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Channel failed validation; carries the full report.
class InvalidChannelError : public Error {
 public:
  InvalidChannelError(const std::string& msg, ValidationReport report)
      : Error(msg), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Channel has no output reachable from every initial output.
class NotConnectedError : public Error {
 public:
  using Error::Error;
};

// The output chain has more than one closed communication class.
class NonUniqueStationaryError : public Error {
 public:
  using Error::Error;
};

// |X|^|S| exceeds the enumeration cap.
class StrategyOverflowError : public Error {
 public:
  using Error::Error;
};

// Policy-grid enumeration would exceed the point budget.
class GridTooLargeError : public Error {
 public:
  using Error::Error;
};

// Closed-form objective evaluated at a + b + eta = 0.
class DegenerateDenominatorError : public Error {
 public:
  using Error::Error;
};

// File/JSON reading failure; message carries file:line or a field path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nostcap
