#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cantisq {

/// Outcome of a hierarchy or validity check. Results carry this instead of
/// refusing to compute, so sweeps can cross into invalid regions.
enum class Validity { valid, marginal, violated };

inline constexpr std::string_view to_string(Validity v) {
  switch (v) {
    case Validity::valid: return "valid";
    case Validity::marginal: return "marginal";
    case Validity::violated: return "violated";
  }
  return "?";
}

// Error classes map one-to-one onto CLI exit codes (see io/exit_codes.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class CutoffLimitedError : public Error {
 public:
  using Error::Error;
};

}  // namespace cantisq
