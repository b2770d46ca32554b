#include "metrobound/error.hpp"

namespace metrobound {

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
      return "invalid input";
    case ErrorKind::Infeasible:
      return "infeasible";
    case ErrorKind::DimensionCap:
      return "dimension cap exceeded";
    case ErrorKind::BasisMismatch:
      return "basis mismatch";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace metrobound
