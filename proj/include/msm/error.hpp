#pragma once

#include <stdexcept>
#include <string>

namespace msm {

// Coarse error classes. The C API maps these one-to-one onto status codes and
// the CLI maps them onto exit codes (input -> 2, everything else -> 1).
enum class ErrorCode {
  invalid_argument = 1,
  input = 2,       // malformed user input: scripts, params, unreadable files
  io = 3,          // failures writing outputs
  state = 4,       // call made in the wrong session state
  internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::invalid_argument, message);
}

}  // namespace msm
