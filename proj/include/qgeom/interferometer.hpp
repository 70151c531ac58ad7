#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/error.hpp"
#include "qgeom/noise.hpp"
#include "qgeom/planck_units.hpp"
#include "qgeom/spectral.hpp"
#include "qgeom/text.hpp"
#include "qgeom/vec3.hpp"

namespace qgeom {

/// Apparatus whose mirrors sample the geometric jitter.
struct InterferometerConfig {
  double arm_length = 1.0;  // m
  Vec3 position{0.0, 0.0, 0.0};  // m
  std::string label;

  void validate() const {
    if (!(arm_length > 0.0) || !std::isfinite(arm_length)) {
      throw Error(ErrorKind::invalid_input, "arm_length_m must be positive and finite");
    }
    for (double p : position) {
      if (!std::isfinite(p)) throw Error(ErrorKind::invalid_input, "position_m must be finite");
    }
  }
};

/**
 * Reads `key = value` lines (`#` starts a comment). Recognized keys:
 * `label`, `arm_length_m`, `position_m` (three comma-separated numbers).
 * Unknown keys are rejected.
 */
inline InterferometerConfig parse_interferometer_config(std::istream& in) {
  InterferometerConfig cfg;
  bool have_arm = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = detail::trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));
    if (key == "label") {
      cfg.label = value;
    } else if (key == "arm_length_m") {
      cfg.arm_length = detail::parse_number(value, key);
      have_arm = true;
    } else if (key == "position_m") {
      std::stringstream ss(value);
      std::string item;
      std::vector<double> coords;
      while (std::getline(ss, item, ',')) coords.push_back(detail::parse_number(detail::trim(item), key));
      if (coords.size() != 3) throw Error(ErrorKind::parse, "position_m needs three comma-separated numbers");
      cfg.position = {coords[0], coords[1], coords[2]};
    } else {
      throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_arm) throw Error(ErrorKind::parse, "missing arm_length_m");
  cfg.validate();
  return cfg;
}

inline InterferometerConfig load_interferometer_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open config file " + path);
  return parse_interferometer_config(in);
}

/// sqrt(lambda L).
inline double predict_rms(const InterferometerConfig& config, const PlanckScale& scale) {
  config.validate();
  return std::sqrt(scale.lambda() * config.arm_length);
}

/// c / (2 L): inverse light round-trip time, where the jitter spectrum rolls off.
inline double knee_frequency(double arm_length, const PlanckScale& scale) {
  if (!(arm_length > 0.0)) throw Error(ErrorKind::invalid_separation, "arm length must be positive");
  return scale.c() / (2.0 * arm_length);
}

inline void require_frequency_grid(std::span<const double> frequencies) {
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] >= 0.0) || !std::isfinite(frequencies[i])) {
      throw Error(ErrorKind::invalid_grid, "frequencies must be finite and non-negative");
    }
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      throw Error(ErrorKind::invalid_grid, "frequencies must be strictly increasing");
    }
  }
}

/// Output displacement PSD (unity optical response).
inline SpectrumEstimate predict_output_psd(const InterferometerConfig& config, std::span<const double> frequencies,
                                           const PlanckScale& scale) {
  config.validate();
  require_frequency_grid(frequencies);
  return analytic_spectrum(config.arm_length, frequencies, scale);
}

/// Causal-overlap factor max(0, 1 - d / (2 min(L_a, L_b))).
inline double overlap_factor(const InterferometerConfig& a, const InterferometerConfig& b) {
  const double d = norm(a.position - b.position);
  const double reach = 2.0 * std::min(a.arm_length, b.arm_length);
  return std::max(0.0, 1.0 - d / reach);
}

/// gamma(d) sqrt(PSD_a PSD_b): nearby instruments share the jitter.
inline SpectrumEstimate cross_spectrum(const InterferometerConfig& a, const InterferometerConfig& b,
                                       std::span<const double> frequencies, const PlanckScale& scale) {
  a.validate();
  b.validate();
  require_frequency_grid(frequencies);
  const double gamma = overlap_factor(a, b);
  SpectrumEstimate out;
  out.frequencies.assign(frequencies.begin(), frequencies.end());
  out.psd.reserve(frequencies.size());
  for (double f : frequencies) {
    const double pa = analytic_psd(a.arm_length, f, scale);
    const double pb = analytic_psd(b.arm_length, f, scale);
    out.psd.push_back(gamma * std::sqrt(pa * pb));
  }
  return out;
}

enum class Verdict { detect, marginal, exclude };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::detect: return "detect";
    case Verdict::marginal: return "marginal";
    case Verdict::exclude: return "exclude";
  }
  return "unknown";
}

inline constexpr double detect_threshold = 5.0;
inline constexpr double marginal_threshold = 1.0;

constexpr Verdict verdict_for(double snr) {
  if (snr >= detect_threshold) return Verdict::detect;
  if (snr >= marginal_threshold) return Verdict::marginal;
  return Verdict::exclude;
}

struct DetectabilityReport {
  double signal_rms = 0.0;  // m
  double band_lo = 0.0;     // Hz
  double band_hi = 0.0;     // Hz
  double instrument_floor = 0.0;  // m^2/Hz
  double band_power = 0.0;  // m^2, signal integrated over the band
  double snr_proxy = 0.0;
  Verdict verdict = Verdict::exclude;
};

/// Integral of analytic_psd over [lo, hi] by composite Gauss-Legendre
/// (5 nodes per panel, panels a quarter lobe wide).
inline double analytic_band_power(double arm_length, double lo, double hi, const PlanckScale& scale) {
  static constexpr double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                      0.9061798459386640};
  static constexpr double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                        0.2369268850561891, 0.2369268850561891};
  const double lobe = 1.0 / coherence_time(arm_length, scale);
  const double panels_real = std::ceil(4.0 * (hi - lo) / lobe);
  const auto panels = static_cast<std::size_t>(std::clamp(panels_real, 1.0, 1.0e7));
  const double h = (hi - lo) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + h * (static_cast<double>(p) + 0.5);
    for (int q = 0; q < 5; ++q) total += weights[q] * analytic_psd(arm_length, mid + 0.5 * h * nodes[q], scale);
  }
  return 0.5 * h * total;
}

/**
 * Radiometer-style detectability: the band-averaged signal PSD over the
 * instrument floor, times sqrt(T df).
 */
inline DetectabilityReport detectability(const InterferometerConfig& config, double floor, double band_lo,
                                         double band_hi, double integration_time, const PlanckScale& scale) {
  config.validate();
  if (!(floor > 0.0) || !std::isfinite(floor)) throw Error(ErrorKind::invalid_input, "floor must be positive");
  if (!(integration_time > 0.0)) throw Error(ErrorKind::invalid_input, "integration time must be positive");
  if (!(band_lo >= 0.0) || !(band_hi > band_lo) || !std::isfinite(band_hi)) {
    throw Error(ErrorKind::invalid_band, "band must satisfy 0 <= lo < hi");
  }
  DetectabilityReport r;
  r.signal_rms = predict_rms(config, scale);
  r.band_lo = band_lo;
  r.band_hi = band_hi;
  r.instrument_floor = floor;
  const double width = band_hi - band_lo;
  r.band_power = analytic_band_power(config.arm_length, band_lo, band_hi, scale);
  r.snr_proxy = r.band_power / (floor * width) * std::sqrt(integration_time * width);
  r.verdict = verdict_for(r.snr_proxy);
  return r;
}

}  // namespace qgeom
