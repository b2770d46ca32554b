#pragma once

#include <stdexcept>
#include <string>

namespace metrobound {

enum class ErrorKind {
  InvalidInput,
  Infeasible,
  DimensionCap,
  BasisMismatch,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace metrobound
