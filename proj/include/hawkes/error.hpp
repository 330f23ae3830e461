#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hawkes {

enum class ErrorCode {
  InvalidArgument,
  NodeOutOfRange,
  InvalidKernel,
  ExplosiveProcess,
  RateBoundViolation,
  NonFinite,
  SingularFisher,
  Infeasible,
  NonStationary,
  KernelUnsupported,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was broken so they can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hawkes
