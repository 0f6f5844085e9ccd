#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diagfp {

enum class ErrorCode {
  Usage,
  Parse,
  UnsupportedAbstraction,
  ConvexityViolation,
  StateBudget,
  InternalConsistency,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry the 1-based line they were raised on (0 when not tied to a line).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::Parse, line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void usage_error(const std::string& message) {
  throw Error(ErrorCode::Usage, message);
}

}  // namespace diagfp
