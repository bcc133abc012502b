#pragma once

#include <stdexcept>
#include <string>

namespace vetrank {

enum class ErrorKind {
  InvalidMatrix,
  NonPositiveWeight,
  IndexOutOfRange,
  LengthMismatch,
  NotAPermutation,
  DegenerateGeometry,
  TooFewCriteria,
  CriteriaMismatch,
  TooFewPoints,
  ZeroOutputVariance,
  ParseError,
  EmptyWindow,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (CLI exit
// codes, HTTP status mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vetrank
