#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace krylov {

// Exactly 17 significant digits, the CSV float format.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace krylov
