#pragma once

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "qgeom/error.hpp"
#include "qgeom/noise.hpp"

namespace qgeom {

/// One-sided power spectral density on a frequency grid.
struct SpectrumEstimate {
  std::vector<double> frequencies;  // Hz
  std::vector<double> psd;          // m^2/Hz
  std::size_t segment_count = 0;    // 0 for model spectra
  std::size_t segment_length = 0;
};

/// Trapezoidal integral of psd over the grid.
inline double integrate_psd(const SpectrumEstimate& s) {
  double total = 0.0;
  for (std::size_t i = 1; i < s.frequencies.size(); ++i) {
    total += 0.5 * (s.psd[i] + s.psd[i - 1]) * (s.frequencies[i] - s.frequencies[i - 1]);
  }
  return total;
}

inline double sample_mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Population (1/N) variance about the sample mean.
inline double sample_variance(std::span<const double> x) {
  const double m = sample_mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size());
}

/// Biased sample autocovariance at lags 0..max_lag samples.
struct AutocorrelationTable {
  double sample_rate = 0.0;
  std::vector<double> values;

  double lag_seconds(std::size_t k) const { return static_cast<double>(k) / sample_rate; }

  /// Linear interpolation between neighbouring sample lags.
  double value_at(double lag) const {
    const double pos = std::abs(lag) * sample_rate;
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= values.size()) {
      if (k < values.size() && pos == static_cast<double>(k)) return values[k];
      throw Error(ErrorKind::insufficient_data, "lag outside the computed table");
    }
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * values[k] + w * values[k + 1];
  }
};

/// C(k) = (1/N) sum_{i < N-k} (x_i - mean)(x_{i+k} - mean), by direct sums.
inline std::vector<double> autocovariance_direct(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  const double m = sample_mean(x);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = x[i] - m;
  std::vector<double> out(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) acc += centered[i] * centered[i + k];
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

/// Same estimator through a zero-padded FFT (Wiener-Khinchin).
inline std::vector<double> autocovariance_fft(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  std::size_t nfft = 1;
  while (nfft < 2 * n) nfft <<= 1;
  const double m = sample_mean(x);
  std::vector<double> padded(nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = x[i] - m;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, padded);
  for (auto& v : spectrum) v = std::norm(v);
  std::vector<std::complex<double>> back;
  fft.inv(back, spectrum);
  std::vector<double> out(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) out[k] = back[k].real() / static_cast<double>(n);
  return out;
}

inline AutocorrelationTable autocorrelation(std::span<const double> x, double sample_rate, double max_lag) {
  const double duration = static_cast<double>(x.size()) / sample_rate;
  if (!(max_lag >= 0.0) || max_lag > duration / 4.0) {
    throw Error(ErrorKind::insufficient_data, "max lag must not exceed a quarter of the duration");
  }
  const auto lags = static_cast<std::size_t>(std::ceil(max_lag * sample_rate));
  AutocorrelationTable table;
  table.sample_rate = sample_rate;
  // Direct sums win below a few dozen lags.
  table.values = lags <= 32 ? autocovariance_direct(x, lags) : autocovariance_fft(x, lags);
  if (lags > 32) {
    // Lag 0 is defined as the sample variance; pin it against FFT rounding.
    table.values[0] = sample_variance(x);
  }
  return table;
}

inline AutocorrelationTable autocorrelation(const NoiseSeries& series, double max_lag) {
  return autocorrelation(series.samples(), series.sample_rate(), max_lag);
}

/// Periodic Hann window of length n.
inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

/**
 * Welch estimate of the one-sided PSD: mean-removed, Hann-windowed segments
 * of `segment_length` samples overlapping by `overlap_fraction`, periodograms
 * averaged and scaled so that sum(psd) * df equals the windowed variance.
 */
inline SpectrumEstimate welch_psd(std::span<const double> x, double sample_rate, std::size_t segment_length,
                                  double overlap_fraction = 0.5) {
  if (segment_length < 2 || (segment_length & (segment_length - 1)) != 0) {
    throw Error(ErrorKind::segmentation, "segment length must be a power of two >= 2");
  }
  if (segment_length > x.size()) throw Error(ErrorKind::segmentation, "segment longer than series");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw Error(ErrorKind::invalid_input, "overlap fraction must lie in [0, 1)");
  }
  if (!(sample_rate > 0.0)) throw Error(ErrorKind::invalid_input, "sample rate must be positive");

  const std::size_t overlap = static_cast<std::size_t>(std::floor(overlap_fraction * static_cast<double>(segment_length)));
  const std::size_t hop = std::max<std::size_t>(1, segment_length - overlap);
  const std::size_t bins = segment_length / 2 + 1;
  const auto window = hann_window(segment_length);
  const double window_power = std::inner_product(window.begin(), window.end(), window.begin(), 0.0);

  Eigen::FFT<double> fft;
  std::vector<double> buffer(segment_length);
  std::vector<std::complex<double>> spectrum;
  std::vector<double> accum(bins, 0.0);
  std::size_t segments = 0;
  for (std::size_t start = 0; start + segment_length <= x.size(); start += hop) {
    const auto seg = x.subspan(start, segment_length);
    const double m = sample_mean(seg);
    for (std::size_t i = 0; i < segment_length; ++i) buffer[i] = (seg[i] - m) * window[i];
    fft.fwd(spectrum, buffer);
    for (std::size_t k = 0; k < bins; ++k) accum[k] += std::norm(spectrum[k]);
    ++segments;
  }

  SpectrumEstimate out;
  out.segment_count = segments;
  out.segment_length = segment_length;
  out.frequencies.resize(bins);
  out.psd.resize(bins);
  const double df = sample_rate / static_cast<double>(segment_length);
  const double norm = 1.0 / (sample_rate * window_power * static_cast<double>(segments));
  for (std::size_t k = 0; k < bins; ++k) {
    out.frequencies[k] = df * static_cast<double>(k);
    const bool edge = k == 0 || k == bins - 1;
    out.psd[k] = accum[k] * norm * (edge ? 1.0 : 2.0);
  }
  return out;
}

inline SpectrumEstimate power_spectrum(const NoiseSeries& series, std::size_t segment_length,
                                       double overlap_fraction = 0.5) {
  return welch_psd(series.samples(), series.sample_rate(), segment_length, overlap_fraction);
}

/// Analytic one-sided PSD of the holographic-noise model on a frequency grid.
inline SpectrumEstimate analytic_spectrum(double arm_length, std::span<const double> frequencies,
                                          const PlanckScale& scale, const NoiseOptions& options = {}) {
  SpectrumEstimate out;
  out.frequencies.assign(frequencies.begin(), frequencies.end());
  out.psd.reserve(frequencies.size());
  for (double f : frequencies) out.psd.push_back(analytic_psd(arm_length, f, scale, options));
  return out;
}

}  // namespace qgeom
