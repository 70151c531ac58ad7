#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qgeom/algebra.hpp"
#include "qgeom/error.hpp"
#include "qgeom/noise.hpp"
#include "qgeom/spectral.hpp"
#include "qgeom/text.hpp"

namespace qgeom {

inline constexpr std::string_view series_csv_header = "t_s,x_m";
inline constexpr std::string_view spectrum_csv_header = "f_hz,psd_m2_per_hz";
inline constexpr std::string_view matrix_csv_header = "row,col,re,im";
inline constexpr std::string_view bounds_csv_header = "mass_kg,compton_m,schwarzschild_m";

/// 17 significant digits: parses back to the identical double.
inline std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, ptr);
}

inline double parse_field(std::string_view field, std::size_t lineno) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace detail

/// Row n holds t = n / sample_rate and x_n.
inline void write_series_csv(std::ostream& out, const NoiseSeries& series) {
  std::string buf;
  buf.reserve(1 << 16);
  buf.append(series_csv_header).push_back('\n');
  const auto& x = series.samples();
  for (std::size_t n = 0; n < x.size(); ++n) {
    detail::append_double(buf, static_cast<double>(n) / series.sample_rate());
    buf.push_back(',');
    detail::append_double(buf, x[n]);
    buf.push_back('\n');
    if (buf.size() > (1 << 16) - 100) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

struct RawSeries {
  std::vector<double> times;
  std::vector<double> values;
};

/// Two-column CSV with the exact header of write_series_csv.
inline RawSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != series_csv_header) {
    throw Error(ErrorKind::parse, "series CSV must start with header " + std::string(series_csv_header));
  }
  RawSeries raw;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": expected 2 fields");
    const std::string_view view(line);
    raw.times.push_back(detail::parse_field(view.substr(0, comma), lineno));
    raw.values.push_back(detail::parse_field(view.substr(comma + 1), lineno));
  }
  return raw;
}

inline void write_spectrum_csv(std::ostream& out, const SpectrumEstimate& s) {
  std::string buf;
  buf.append(spectrum_csv_header).push_back('\n');
  for (std::size_t i = 0; i < s.frequencies.size(); ++i) {
    detail::append_double(buf, s.frequencies[i]);
    buf.push_back(',');
    detail::append_double(buf, s.psd[i]);
    buf.push_back('\n');
  }
  out << buf;
}

inline void write_matrix_csv(std::ostream& out, const ComplexMatrix& m) {
  std::string buf;
  buf.append(matrix_csv_header).push_back('\n');
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      buf += std::to_string(r) + ',' + std::to_string(c) + ',';
      detail::append_double(buf, m(r, c).real());
      buf.push_back(',');
      detail::append_double(buf, m(r, c).imag());
      buf.push_back('\n');
    }
  }
  out << buf;
}

}  // namespace qgeom
