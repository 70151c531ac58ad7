#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "qgeom/error.hpp"

namespace qgeom {

/// Non-negative half-integer j, stored exactly as 2j.
class Spin {
 public:
  constexpr Spin() = default;

  static Spin from_twice(std::int64_t twice_j) {
    if (twice_j < 0) throw Error(ErrorKind::invalid_spin, "spin must be non-negative");
    Spin s;
    s.twice_ = twice_j;
    return s;
  }

  static Spin from_double(double j) {
    if (!std::isfinite(j) || j < 0.0) {
      throw Error(ErrorKind::invalid_spin, "spin must be non-negative and finite");
    }
    const double twice = 2.0 * j;
    if (twice != std::floor(twice) || twice > 9.0e15) {
      throw Error(ErrorKind::invalid_spin, "spin must be an integer multiple of 1/2");
    }
    return from_twice(static_cast<std::int64_t>(twice));
  }

  /// Accepts "3", "3/2", "1.5".
  static Spin parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      std::int64_t num = 0;
      const auto head = text.substr(0, slash);
      const auto tail = text.substr(slash + 1);
      auto r = std::from_chars(head.data(), head.data() + head.size(), num);
      if (r.ec != std::errc() || r.ptr != head.data() + head.size() || tail != "2") {
        throw Error(ErrorKind::invalid_spin, "cannot parse spin '" + std::string(text) + "'");
      }
      return from_twice(num);
    }
    double value = 0.0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), value);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
      throw Error(ErrorKind::invalid_spin, "cannot parse spin '" + std::string(text) + "'");
    }
    return from_double(value);
  }

  constexpr std::int64_t twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return 0.5 * static_cast<double>(twice_); }
  constexpr std::int64_t dimension() const noexcept { return twice_ + 1; }
  constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

  std::string to_string() const {
    return is_integer() ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

  friend constexpr auto operator<=>(Spin, Spin) = default;

 private:
  std::int64_t twice_ = 0;
};

}  // namespace qgeom
