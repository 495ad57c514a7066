#pragma once

#include <stdexcept>
#include <string>

namespace oas {

enum class ErrorCode {
    kInvalidArgument,
    kValidation,
    kParse,
    kIo,
    kRuntime,
};

/// Library-wide exception carrying a coarse error code (mirrored by the C API).
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace oas
