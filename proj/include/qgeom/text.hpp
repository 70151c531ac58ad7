#pragma once

#include <exception>
#include <string>
#include <string_view>

#include "qgeom/error.hpp"

namespace qgeom::detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::parse, "bad number '" + text + "' for key " + key);
}

}  // namespace qgeom::detail
