#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/error.hpp"
#include "qgeom/planck_units.hpp"
#include "qgeom/rng.hpp"

namespace qgeom {

struct NoiseOptions {
  /// Coherence window in units of L/c. 2 is the light round trip.
  double window_factor = 2.0;
};

/// Uniformly sampled transverse displacement (m) of an apparatus of arm length L.
class NoiseSeries {
 public:
  NoiseSeries(std::vector<double> samples, double sample_rate, double arm_length, std::uint64_t seed,
              double coherence_time)
      : samples_(std::move(samples)),
        sample_rate_(sample_rate),
        arm_length_(arm_length),
        seed_(seed),
        coherence_time_(coherence_time) {
    if (samples_.size() < 2) throw Error(ErrorKind::insufficient_data, "series needs at least 2 samples");
    if (!(sample_rate_ * coherence_time_ >= 4.0)) {
      throw Error(ErrorKind::undersampling, "fewer than 4 samples per coherence window");
    }
  }

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate() const noexcept { return sample_rate_; }
  double arm_length() const noexcept { return arm_length_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double coherence_time() const noexcept { return coherence_time_; }
  double duration() const noexcept { return static_cast<double>(samples_.size()) / sample_rate_; }

 private:
  std::vector<double> samples_;
  double sample_rate_;
  double arm_length_;
  std::uint64_t seed_;
  double coherence_time_;
};

inline double coherence_time(double arm_length, const PlanckScale& scale, const NoiseOptions& options = {}) {
  return options.window_factor * arm_length / scale.c();
}

/**
 * Stationary holographic jitter: the continuous-time boxcar average of white
 * noise over the coherence window tau = window_factor L / c, sampled at
 * `sample_rate` and scaled to variance lambda L. The autocorrelation is the
 * triangle lambda L max(0, 1 - |t| / tau) at every lag.
 *
 * The window is rarely a whole number of samples, so each sampling step is
 * split at the fractional offset of the window start and the Brownian
 * increments of both pieces are drawn. Two normals (one Box-Muller pair) are
 * consumed per step; output depends only on the inputs.
 */
inline NoiseSeries generate_timeseries(double arm_length, double sample_rate, double duration,
                                       std::uint64_t seed, const PlanckScale& scale,
                                       const NoiseOptions& options = {}) {
  if (!(arm_length > 0.0) || !std::isfinite(arm_length)) {
    throw Error(ErrorKind::invalid_separation, "arm length must be positive and finite");
  }
  if (!(options.window_factor > 0.0) || !std::isfinite(options.window_factor)) {
    throw Error(ErrorKind::invalid_input, "window factor must be positive");
  }
  if (!std::isfinite(sample_rate) || !(sample_rate > 2.0 * scale.c() / arm_length)) {
    throw Error(ErrorKind::undersampling, "sample rate must exceed 2c/L");
  }
  const double tau = coherence_time(arm_length, scale, options);
  if (!(sample_rate * tau >= 4.0)) {
    throw Error(ErrorKind::undersampling, "fewer than 4 samples per coherence window");
  }
  if (!std::isfinite(duration) || !(duration >= 10.0 * tau)) {
    throw Error(ErrorKind::insufficient_duration, "duration must cover at least 10 coherence times");
  }
  const double count_real = std::round(sample_rate * duration);
  if (count_real > 4.0e9) throw Error(ErrorKind::capacity, "series too long");
  const auto count = static_cast<std::size_t>(count_real);

  // Window in sample units: whole steps plus a fractional remainder.
  const double window = sample_rate * tau;
  const auto whole = static_cast<std::size_t>(std::floor(window));
  const double frac = window - static_cast<double>(whole);
  const double head_sd = std::sqrt(1.0 - frac);
  const double tail_sd = std::sqrt(frac);

  // Step k spans sample time (k - whole - 2, k - whole - 1]. `tail[k]` is the
  // Brownian increment over the last `frac` of step k and `cumulative[k]` the
  // path at its end, so sample n integrates tail[n + 1] plus whole steps
  // n + 2 .. n + whole + 1.
  const std::size_t steps = count + whole;
  std::vector<double> cumulative(steps + 1, 0.0);
  std::vector<double> tail(steps + 1, 0.0);
  SplitMix64 rng(seed);
  double path = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto [z1, z2] = standard_normal_pair(rng);
    tail[k] = tail_sd * z2;
    path += head_sd * z1 + tail[k];
    cumulative[k] = path;
  }

  const double amplitude = std::sqrt(scale.lambda() * arm_length / window);
  std::vector<double> samples(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t end = n + whole + 1;
    const std::size_t start = n + 1;
    samples[n] = amplitude * (tail[start] + cumulative[end] - cumulative[start]);
  }
  return NoiseSeries(std::move(samples), sample_rate, arm_length, seed, tau);
}

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// Two-sided density lambda L tau sinc^2(f tau): Fourier transform of the triangle ACF.
inline double analytic_psd_two_sided(double arm_length, double frequency, const PlanckScale& scale,
                                     const NoiseOptions& options = {}) {
  if (!(arm_length > 0.0)) throw Error(ErrorKind::invalid_separation, "arm length must be positive");
  if (!(frequency >= 0.0)) throw Error(ErrorKind::invalid_input, "frequency must be non-negative");
  const double tau = coherence_time(arm_length, scale, options);
  const double s = sinc(frequency * tau);
  return scale.lambda() * arm_length * tau * s * s;
}

/// One-sided density (m^2/Hz); integrates to lambda L over [0, inf).
inline double analytic_psd(double arm_length, double frequency, const PlanckScale& scale,
                           const NoiseOptions& options = {}) {
  return 2.0 * analytic_psd_two_sided(arm_length, frequency, scale, options);
}

/// Triangle autocorrelation lambda L max(0, 1 - |lag| / tau).
inline double analytic_autocorrelation(double arm_length, double lag, const PlanckScale& scale,
                                       const NoiseOptions& options = {}) {
  const double tau = coherence_time(arm_length, scale, options);
  return scale.lambda() * arm_length * std::max(0.0, 1.0 - std::abs(lag) / tau);
}

/// RMS displacement over the one-way light time: c sqrt(lambda / L).
inline double drift_velocity_scale(double arm_length, const PlanckScale& scale) {
  if (!(arm_length > 0.0)) throw Error(ErrorKind::invalid_separation, "arm length must be positive");
  return scale.c() * std::sqrt(scale.lambda() / arm_length);
}

}  // namespace qgeom
