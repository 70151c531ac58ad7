#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

#include "qgeom/error.hpp"
#include "qgeom/planck_units.hpp"

namespace qgeom {

/// Quantum size line: reduced Compton length hbar/(mc) or the full h/(mc).
enum class ComptonConvention { reduced, planck };

enum class Regime { forbidden_quantum, forbidden_blackhole, field_theory_side, classical_matter_side };

constexpr std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::forbidden_quantum: return "forbidden_quantum";
    case Regime::forbidden_blackhole: return "forbidden_blackhole";
    case Regime::field_theory_side: return "field_theory_side";
    case Regime::classical_matter_side: return "classical_matter_side";
  }
  return "unknown";
}

struct RegimeClassification {
  Regime regime;
  double compton;        // m
  double schwarzschild;  // m
};

inline void require_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorKind::invalid_mass, "mass must be positive and finite");
}

/// Smallest size of a single quantum of mass-energy m c^2.
inline double compton_size(double mass, const PlanckScale& scale,
                           ComptonConvention convention = ComptonConvention::reduced) {
  require_mass(mass);
  const double factor = convention == ComptonConvention::reduced ? 1.0 : 2.0 * std::numbers::pi;
  return factor * scale.hbar() / (mass * scale.c());
}

/// 2 G m / c^2.
inline double schwarzschild_radius(double mass, const PlanckScale& scale) {
  require_mass(mass);
  return 2.0 * scale.G() * mass / (scale.c() * scale.c());
}

/// Mass where the two lines cross: k hbar/(m c) = 2 G m / c^2.
inline double intersection_mass(const PlanckScale& scale, ComptonConvention convention = ComptonConvention::reduced) {
  const double factor = convention == ComptonConvention::reduced ? 1.0 : 2.0 * std::numbers::pi;
  return std::sqrt(factor * scale.hbar() * scale.c() / (2.0 * scale.G()));
}

/// Common length at the crossing; sqrt(2) planck_length in the reduced convention.
inline double intersection_scale(const PlanckScale& scale, ComptonConvention convention = ComptonConvention::reduced) {
  return schwarzschild_radius(intersection_mass(scale, convention), scale);
}

inline RegimeClassification classify(double mass, double size, const PlanckScale& scale,
                                     ComptonConvention convention = ComptonConvention::reduced) {
  if (!(mass > 0.0) || !(size > 0.0) || !std::isfinite(mass) || !std::isfinite(size)) {
    throw Error(ErrorKind::invalid_input, "mass and size must be positive and finite");
  }
  RegimeClassification out{Regime::classical_matter_side, compton_size(mass, scale, convention),
                           schwarzschild_radius(mass, scale)};
  if (out.compton >= out.schwarzschild) {
    if (size < out.compton) {
      out.regime = Regime::forbidden_quantum;
      return out;
    }
  } else if (size < out.schwarzschild) {
    out.regime = Regime::forbidden_blackhole;
    return out;
  }
  out.regime = mass < scale.planck_mass() ? Regime::field_theory_side : Regime::classical_matter_side;
  return out;
}

}  // namespace qgeom
