#pragma once

#include <fmt/format.h>

#include <string>

namespace mvlab::detail {

// Shortest representation that round-trips; output files are compared
// byte-for-byte so every writer goes through here.
inline std::string num(double v) { return fmt::format("{}", v); }

}  // namespace mvlab::detail
