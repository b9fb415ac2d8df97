#pragma once

#include <stdexcept>
#include <string>

namespace mvlab {

enum class ErrorKind {
  domain,
  resolution,
  commensurability,
  step_size,
  degenerate_input,
  arity,
  capacity,
  protocol,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for every precondition failure in the library. The
// kind lets callers (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Step-size, capacity and resolution guards are numerical limits rather
  // than malformed input.
  bool is_numerical_guard() const noexcept {
    return kind_ == ErrorKind::step_size || kind_ == ErrorKind::capacity ||
           kind_ == ErrorKind::resolution;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace mvlab
