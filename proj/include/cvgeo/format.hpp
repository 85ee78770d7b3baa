// Shortest round-trip text for doubles.
#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace cvgeo {

inline std::string format_double(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace cvgeo
