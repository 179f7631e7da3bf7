#pragma once

#include <stdexcept>
#include <string>

namespace clab {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  DimensionMismatch,
  DegenerateLine,
  DegenerateSlope,
  OutOfWindow,
  ThinCylinder,
  NonTransverse,
  Infeasible,
  Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

// Single exception type for the core; the C layer maps `code()` to status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace clab
