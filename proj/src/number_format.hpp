#pragma once

#include <charconv>
#include <string>

namespace tsarm::detail {

// Shortest decimal form that parses back to the same double.
inline std::string shortest(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace tsarm::detail
