#include <gtest/gtest.h>

#include <cmath>
#include <span>

#include "qgeom/noise.hpp"
#include "qgeom/spectral.hpp"
#include "support/oracles.hpp"

namespace {

using namespace qgeom;

const PlanckScale scale;
const double lam = scale.lambda();

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::parse;
}

TEST(GenerateTimeseries, FortyMetreVarianceAndRms) {
  const auto s = generate_timeseries(40.0, 2.5e7, 0.1, 7, scale);
  ASSERT_EQ(s.size(), 2'500'000u);
  EXPECT_DOUBLE_EQ(s.coherence_time(), 80.0 / scale.c());
  const double var = sample_variance(s.samples());
  EXPECT_NEAR(var / (lam * 40.0), 1.0, 0.05);
  EXPECT_NEAR(std::sqrt(var) / 1.350e-17, 1.0, 0.05);
}

TEST(GenerateTimeseries, OneMetreRmsMatchesPrintedConstant) {
  const auto s = generate_timeseries(1.0, 1.2e9, 2.0e-5, 11, scale);
  EXPECT_NEAR(std::sqrt(sample_variance(s.samples())) / 2.135e-18, 1.0, 0.10);
}

TEST(GenerateTimeseries, Deterministic) {
  const auto a = generate_timeseries(40.0, 2.5e7, 1e-3, 7, scale);
  const auto b = generate_timeseries(40.0, 2.5e7, 1e-3, 7, scale);
  const auto c = generate_timeseries(40.0, 2.5e7, 1e-3, 8, scale);
  EXPECT_EQ(a.samples(), b.samples());
  EXPECT_NE(a.samples(), c.samples());
}

TEST(GenerateTimeseries, Preconditions) {
  // 2c/L = 1.5e7 Hz at 40 m
  EXPECT_EQ(kind_of([] { generate_timeseries(40.0, 1.4e7, 0.01, 1, scale); }), ErrorKind::undersampling);
  EXPECT_EQ(kind_of([] { generate_timeseries(40.0, 2.5e7, 1e-6, 1, scale); }), ErrorKind::insufficient_duration);
  EXPECT_EQ(kind_of([] { generate_timeseries(0.0, 2.5e7, 0.01, 1, scale); }), ErrorKind::invalid_separation);
  EXPECT_EQ(kind_of([] { generate_timeseries(40.0, 2.5e7, 0.01, 1, scale, NoiseOptions{1.0}); }),
            ErrorKind::undersampling);
}

TEST(GenerateTimeseries, StationaryHalves) {
  const auto s = generate_timeseries(40.0, 2.5e7, 0.05, 3, scale);
  const std::span<const double> all(s.samples());
  const auto half = all.size() / 2;
  EXPECT_NEAR(sample_variance(all.first(half)) / sample_variance(all.last(half)), 1.0, 0.10);
}

TEST(GenerateTimeseries, EnsembleAcfIsExactTriangleAtFractionalWindow) {
  // 6.67 samples per window; the triangle must hold at every integer lag.
  const double L = 40.0;
  const int members = 20;
  std::vector<double> mean(10, 0.0);
  for (int k = 0; k < members; ++k) {
    const auto s = generate_timeseries(L, 2.5e7, 0.02, derive_stream_seed(99, k), scale);
    const auto c = autocovariance_direct(s.samples(), 9);
    for (std::size_t i = 0; i < c.size(); ++i) mean[i] += c[i] / members;
  }
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double expected = analytic_autocorrelation(L, static_cast<double>(i) / 2.5e7, scale);
    EXPECT_NEAR(mean[i], expected, 0.02 * lam * L) << "lag " << i;
  }
}

TEST(GenerateTimeseries, WindowFactorOneHalvesCoherence) {
  const double L = 40.0;
  const auto s = generate_timeseries(L, 1e8, 0.01, 5, scale, NoiseOptions{1.0});
  EXPECT_DOUBLE_EQ(s.coherence_time(), L / scale.c());
  const auto acf = autocorrelation(s, 2.0 * L / scale.c());
  EXPECT_NEAR(acf.value_at(L / scale.c()) / acf.values[0], 0.0, 0.05);
  EXPECT_NEAR(acf.value_at(0.5 * L / scale.c()) / acf.values[0], 0.5, 0.05);
}

TEST(AnalyticPsd, ZeroFrequencyValues) {
  // Two-sided lambda L tau at 40 m; one-sided is twice that.
  EXPECT_NEAR(analytic_psd_two_sided(40.0, 0.0, scale) / 4.866696140072837e-41, 1.0, 1e-13);
  EXPECT_NEAR(analytic_psd(40.0, 0.0, scale) / 9.733392280145674e-41, 1.0, 1e-13);
}

TEST(AnalyticPsd, SincZeros) {
  const double tau = coherence_time(40.0, scale);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_LT(analytic_psd(40.0, k / tau, scale), 1e-30 * analytic_psd(40.0, 0.0, scale)) << k;
  }
}

TEST(AnalyticPsd, IntegratesToLambdaL) {
  const double L = 40.0;
  const double tau = coherence_time(L, scale);
  // Closed form via the sine integral: one-sided integral to X/tau is 2 lambda L F(X); F(inf) = 1/2.
  const double X = 2000.0;
  const double head = 2.0 * lam * L * oracle::sinc2_antiderivative(2.0);
  // Composite Simpson of our density from 2/tau to X/tau plus the 1/(pi^2 X) tail.
  const int n = 200000;
  const double a = 2.0 / tau, b = X / tau, h = (b - a) / n;
  double simpson = analytic_psd(L, a, scale) + analytic_psd(L, b, scale);
  for (int i = 1; i < n; ++i) simpson += (i % 2 ? 4.0 : 2.0) * analytic_psd(L, a + i * h, scale);
  simpson *= h / 3.0;
  const double tail = 2.0 * lam * L / (2.0 * std::numbers::pi * std::numbers::pi * X);
  EXPECT_NEAR((head + simpson + tail) / (lam * L), 1.0, 1e-4);

  // Low band straight from our function against the oracle.
  double low = 0.0;
  const int m = 20000;
  const double hb = (2.0 / tau) / m;
  low = analytic_psd(L, 0.0, scale) + analytic_psd(L, 2.0 / tau, scale);
  for (int i = 1; i < m; ++i) low += (i % 2 ? 4.0 : 2.0) * analytic_psd(L, i * hb, scale);
  low *= hb / 3.0;
  EXPECT_NEAR(low / head, 1.0, 1e-8);
}

TEST(DriftVelocity, Values) {
  const double v1 = drift_velocity_scale(1.0, scale);
  EXPECT_NEAR(v1 / 6.401373694439225e-10, 1.0, 1e-12);
  EXPECT_NEAR(v1 / scale.c() / 2.135e-18, 1.0, 1e-3);
  EXPECT_NEAR(drift_velocity_scale(lam, scale) / scale.c(), 1.0, 1e-15);
  EXPECT_NEAR(drift_velocity_scale(100.0, scale) / v1, 0.1, 1e-15);
}

}  // namespace
