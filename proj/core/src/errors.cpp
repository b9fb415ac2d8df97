#include "mvlab/errors.hpp"

namespace mvlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::commensurability: return "commensurability";
    case ErrorKind::step_size: return "step_size";
    case ErrorKind::degenerate_input: return "degenerate_input";
    case ErrorKind::arity: return "arity";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::protocol: return "protocol";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + " error: " + what);
}

}  // namespace mvlab
