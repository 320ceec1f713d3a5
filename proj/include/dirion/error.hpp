#pragma once

#include <stdexcept>
#include <string>

namespace dirion {

enum class ErrorKind {
  parameter,    // invalid argument to a numerical routine
  domain,       // evaluation point outside the valid range
  config,       // user configuration problem
  numerical,    // solver failure, step-size underflow
  unsupported,  // physically excluded regime (Z >= c)
  internal,     // broken invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dirion
