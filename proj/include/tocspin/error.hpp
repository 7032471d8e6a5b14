#pragma once

#include <stdexcept>
#include <string>

namespace tocspin {

enum class ErrorCode {
  InvalidArgument,
  InvalidBound,
  NotFound,
  NotReached,
  Verification,
  Inconsistent,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tocspin
