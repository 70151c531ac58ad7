#pragma once

#include <cmath>
#include <numbers>

#include "qgeom/error.hpp"

namespace qgeom {

/// CODATA 2018 values, SI units.
namespace codata2018 {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double G = 6.67430e-11;         // m^3 kg^-1 s^-2
inline constexpr double c = 299792458.0;         // m/s
}  // namespace codata2018

/**
 * Fundamental constants and the Planck quantities derived from them.
 *
 * `lambda` is the scale of the position algebra, c t_P / sqrt(4 pi): the
 * commutator coefficient and the eigenvalue spacing of every position
 * component. Immutable once built.
 */
class PlanckScale {
 public:
  /// CODATA 2018 constants.
  PlanckScale() : PlanckScale(codata2018::hbar, codata2018::G, codata2018::c) {}

  PlanckScale(double hbar, double G, double c) : hbar_(hbar), G_(G), c_(c) {
    check_input(hbar, "hbar");
    check_input(G, "G");
    check_input(c, "c");
    planck_length_ = std::sqrt(hbar * G / (c * c * c));
    planck_time_ = planck_length_ / c;
    planck_mass_ = std::sqrt(hbar * c / G);
    lambda_ = planck_length_ / std::sqrt(4.0 * std::numbers::pi);
    if (!(planck_length_ > 0.0 && std::isfinite(planck_length_) && planck_mass_ > 0.0 &&
          std::isfinite(planck_mass_))) {
      throw Error(ErrorKind::invalid_constant, "derived Planck quantities are out of double range");
    }
  }

  double hbar() const noexcept { return hbar_; }
  double G() const noexcept { return G_; }
  double c() const noexcept { return c_; }
  double planck_length() const noexcept { return planck_length_; }
  double planck_time() const noexcept { return planck_time_; }
  double planck_mass() const noexcept { return planck_mass_; }
  double lambda() const noexcept { return lambda_; }

 private:
  static void check_input(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
      throw Error(ErrorKind::invalid_constant,
                  std::string(name) + " must be strictly positive and finite");
    }
  }

  double hbar_;
  double G_;
  double c_;
  double planck_length_;
  double planck_time_;
  double planck_mass_;
  double lambda_;
};

inline PlanckScale derive_planck_scale(double hbar, double G, double c) {
  return PlanckScale(hbar, G, c);
}

}  // namespace qgeom
