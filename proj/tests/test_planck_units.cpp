#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "qgeom/planck_units.hpp"

namespace {

using qgeom::derive_planck_scale;
using qgeom::ErrorKind;
using qgeom::PlanckScale;

TEST(PlanckUnits, RoundedInputsGivePlanckLength) {
  const auto s = derive_planck_scale(1.0546e-34, 6.674e-11, 2.998e8);
  EXPECT_NEAR(s.planck_length(), 1.616e-35, 0.0005e-35);
  EXPECT_NEAR(s.lambda(), 4.559e-36, 0.0005e-36);
  // These rounded inputs give 2.1765e-8 kg; CODATA gives 2.176e-8 to 4 figures.
  EXPECT_NEAR(s.planck_mass() / 2.176e-8, 1.0, 3e-4);
  EXPECT_NEAR(PlanckScale().planck_mass(), 2.176e-8, 0.0005e-8);
}

TEST(PlanckUnits, Codata2018Defaults) {
  const PlanckScale s;
  // mpmath, 40 digits
  EXPECT_NEAR(s.planck_length() / 1.616255023928550e-35, 1.0, 1e-13);
  EXPECT_NEAR(s.lambda() / 4.559371244286088e-36, 1.0, 1e-13);
  EXPECT_NEAR(s.planck_mass() / 2.176434342051127e-8, 1.0, 1e-13);
}

TEST(PlanckUnits, TypeInvariants) {
  const PlanckScale s;
  EXPECT_NEAR(s.planck_length() / std::sqrt(s.hbar() * s.G() / std::pow(s.c(), 3)), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.planck_time(), s.planck_length() / s.c());
  EXPECT_DOUBLE_EQ(s.lambda(), s.planck_length() / std::sqrt(4.0 * std::numbers::pi));
  EXPECT_NEAR(s.c() * s.planck_time() / s.planck_length(), 1.0, 1e-15);
}

TEST(PlanckUnits, ExactRoundNumbers) {
  const auto s = derive_planck_scale(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(s.planck_length(), 1.0);
  EXPECT_DOUBLE_EQ(s.planck_time(), 1.0);
  EXPECT_DOUBLE_EQ(s.planck_mass(), 1.0);
}

TEST(PlanckUnits, HbarScalingProperty) {
  const PlanckScale base;
  for (double factor : {1e-3, 0.5, 2.0, 7.3, 1e4}) {
    const auto scaled = derive_planck_scale(base.hbar() * factor * factor, base.G(), base.c());
    EXPECT_NEAR(scaled.planck_length() / base.planck_length(), factor, 1e-12 * factor) << factor;
  }
}

TEST(PlanckUnits, RejectsBadConstants) {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto [h, g, c] : {std::tuple{0.0, 1.0, 1.0}, std::tuple{1.0, -1.0, 1.0}, std::tuple{1.0, 1.0, inf},
                         std::tuple{nan, 1.0, 1.0}}) {
    try {
      (void)derive_planck_scale(h, g, c);
      FAIL() << "accepted invalid constants";
    } catch (const qgeom::Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_constant);
    }
  }
}

}  // namespace
