#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgeom {

enum class ErrorKind {
  invalid_constant,
  invalid_spin,
  capacity,
  degeneracy,
  shape,
  invalid_separation,
  invalid_radius,
  undersampling,
  insufficient_duration,
  insufficient_data,
  segmentation,
  invalid_grid,
  invalid_band,
  invalid_mass,
  invalid_input,
  parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_constant: return "invalid-constant";
    case ErrorKind::invalid_spin: return "invalid-spin";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::shape: return "shape";
    case ErrorKind::invalid_separation: return "invalid-separation";
    case ErrorKind::invalid_radius: return "invalid-radius";
    case ErrorKind::undersampling: return "undersampling";
    case ErrorKind::insufficient_duration: return "insufficient-duration";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::segmentation: return "segmentation";
    case ErrorKind::invalid_grid: return "invalid-grid";
    case ErrorKind::invalid_band: return "invalid-band";
    case ErrorKind::invalid_mass: return "invalid-mass";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

/// Domain error raised by every qgeom operation. The message is prefixed
/// with the error kind, e.g. "invalid-spin: spin must be a multiple of 1/2".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qgeom
