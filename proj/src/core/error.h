#pragma once

#include <stdexcept>
#include <string>

namespace tsel {

enum class Status {
  kOk = 0,
  kInvalidArgument,
  kShapeMismatch,
  kIo,
  kFormat,
  kNumeric,
  kUnsupported,
  kNotFound,
  kPartialFailure,
};

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& what) {
  throw Error(status, what);
}

}  // namespace tsel
