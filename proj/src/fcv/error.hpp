#pragma once

#include <stdexcept>
#include <string>

namespace fcv {

enum class ErrorKind {
  Validation,     // bad arguments, shape mismatches, malformed inputs
  Certification,  // quadrature rule failed the Gram diagnostic
  Numeric,        // solver breakdown, non-convergence, degenerate geometry
  Io,             // file read/write failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& msg) {
  throw Error(ErrorKind::Validation, msg);
}
[[noreturn]] inline void fail_certification(const std::string& msg) {
  throw Error(ErrorKind::Certification, msg);
}
[[noreturn]] inline void fail_numeric(const std::string& msg) {
  throw Error(ErrorKind::Numeric, msg);
}
[[noreturn]] inline void fail_io(const std::string& msg) {
  throw Error(ErrorKind::Io, msg);
}

}  // namespace fcv
