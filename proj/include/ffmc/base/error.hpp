#pragma once

#include <stdexcept>
#include <string>

namespace ffmc {

enum class ErrorCode {
  InvalidArgument,
  ResourceLimit,
  ConductorMismatch,
  InternalCountError,
  Unsupported,
  Io,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::ResourceLimit: return "RESOURCE_LIMIT";
    case ErrorCode::ConductorMismatch: return "CONDUCTOR_MISMATCH";
    case ErrorCode::InternalCountError: return "INTERNAL_COUNT_ERROR";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ffmc
