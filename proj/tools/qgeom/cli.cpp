#include "qgeom/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>
#include <variant>

#include "qgeom/qgeom.hpp"

namespace qgeom::cli {
namespace {

using json = nlohmann::ordered_json;

/// A cell of tabular output.
using Value = std::variant<double, std::int64_t, std::uint64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

Table key_value_table(const std::vector<std::pair<std::string, Value>>& items) {
  Table t{{"quantity", "value"}, {}};
  for (const auto& [k, v] : items) t.rows.push_back({k, v});
  return t;
}

std::string cell_text(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return std::to_string(x);
        }
      },
      v);
}

json cell_json(const Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

void print_table(std::ostream& out, const Table& t, bool as_json) {
  if (!as_json) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
      out << '\n';
    }
    return;
  }
  // Key/value tables become one object; other tables an array of records.
  if (t.columns == std::vector<std::string>{"quantity", "value"}) {
    json obj = json::object();
    for (const auto& row : t.rows) obj[cell_text(row[0])] = cell_json(row[1]);
    out << obj.dump(2) << '\n';
    return;
  }
  json arr = json::array();
  for (const auto& row : t.rows) {
    json rec = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(rec));
  }
  out << arr.dump(2) << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  return f;
}

void finish_output(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw std::runtime_error("failed writing " + path);
}

Vec3 parse_vec3(const std::string& text, const char* what) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) v.push_back(detail::parse_number(detail::trim(item), what));
  if (v.size() != 3) throw Error(ErrorKind::invalid_input, std::string(what) + " needs three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

std::string vec3_text(const Vec3& v) {
  return format_double(v[0]) + "," + format_double(v[1]) + "," + format_double(v[2]);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QGEOM_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::invalid_input, "QGEOM_SEED is not an unsigned integer");
  }
  return 0;
}

/// Common state shared by every subcommand handler.
struct Context {
  bool as_json = false;
  std::string manifest_out;
  std::ostream* out = nullptr;
};

void write_manifest(const Context& ctx, RunManifest manifest) {
  manifest.tool_version = qgeom::version;
  std::string path = ctx.manifest_out;
  if (path.empty()) {
    if (manifest.output_paths.empty()) return;
    path = manifest.output_paths.front() + ".manifest.json";
  }
  auto f = open_output(path);
  f << to_json(manifest);
  finish_output(f, path);
}

// --- algebra ---------------------------------------------------------------

struct AlgebraArgs {
  std::string spin = "1/2";
  bool check = false;
  bool formula_only = false;
  std::string axis = "0,0,1";
  std::int64_t cap = default_dimension_cap;
  double length = 0.0;
  std::string dump;
  std::string matrix = "x3";
};

void run_algebra(const AlgebraArgs& a, const Context& ctx) {
  const PlanckScale scale;
  const Spin spin = Spin::parse(a.spin);
  const double lambda = scale.lambda();
  std::vector<std::pair<std::string, Value>> items{
      {"spin", spin.to_string()},
      {"dimension", spin.dimension()},
      {"lambda_m", lambda},
      {"radial_m", radial_observable(spin, scale)},
      {"highest_weight_transverse_variance_m2", highest_weight_transverse_variance(spin, scale)},
  };
  if (spin.twice() > 0) {
    items.emplace_back("transverse_over_lambda_radial",
                       highest_weight_transverse_variance(spin, scale) / (lambda * radial_observable(spin, scale)));
  }
  if (spin.is_integer()) {
    items.emplace_back("state_count_discrete", state_count_discrete(spin));
    if (spin.twice() > 0) {
      items.emplace_back("state_count_continuum_at_lambda_j", state_count_continuum(lambda * spin.value(), scale));
    }
  }
  if (a.length > 0.0) {
    items.emplace_back("length_m", a.length);
    items.emplace_back("angular_variance", angular_variance_formula(a.length, scale));
    items.emplace_back("transverse_variance_formula_m2", transverse_variance_formula(a.length, scale));
  } else if (a.length < 0.0) {
    throw Error(ErrorKind::invalid_separation, "length must be positive");
  }

  RunManifest manifest;
  manifest.command = "algebra";
  manifest.parameters = {{"spin", a.spin},  {"check", a.check ? "true" : "false"},
                         {"formula-only", a.formula_only ? "true" : "false"},
                         {"axis", a.axis},  {"cap", std::to_string(a.cap)},
                         {"matrix", a.matrix}};
  if (a.length > 0.0) manifest.parameters["length"] = format_double(a.length);

  if (!a.formula_only) {
    const Vec3 axis = normalized(parse_vec3(a.axis, "axis"));
    const AlgebraRep rep = build_representation(spin, scale, a.cap);
    const auto spectrum = axis_spectrum(rep, {0.0, 0.0, 1.0});
    items.emplace_back("x3_min_m", spectrum.front());
    items.emplace_back("x3_max_m", spectrum.back());
    const StateVector hw = highest_weight_state(rep, axis);
    items.emplace_back("axis", vec3_text(axis));
    items.emplace_back("highest_weight_eigenvalue_m", projection_expectation(rep, hw, axis));
    items.emplace_back("transverse_variance_operator_m2", transverse_variance_operator(rep, hw, axis));
    if (a.check) {
      items.emplace_back("commutator_residual", commutator_residual(rep));
      items.emplace_back("hermiticity_residual", hermiticity_residual(rep));
      items.emplace_back("casimir_residual", casimir_residual(rep));
      items.emplace_back("radial_commutator_residual", radial_commutator_residual(rep));
    }
    if (!a.dump.empty()) {
      int which = a.matrix == "x1" ? 0 : a.matrix == "x2" ? 1 : a.matrix == "x3" ? 2 : -1;
      if (which < 0) throw Error(ErrorKind::invalid_input, "--matrix must be x1, x2 or x3");
      auto f = open_output(a.dump);
      write_matrix_csv(f, rep.x(which));
      finish_output(f, a.dump);
      manifest.output_paths.push_back(a.dump);
    }
  } else if (!a.dump.empty()) {
    throw Error(ErrorKind::invalid_input, "--dump needs matrices; drop --formula-only");
  }

  print_table(*ctx.out, key_value_table(items), ctx.as_json);
  write_manifest(ctx, std::move(manifest));
}

// --- noise -----------------------------------------------------------------

struct NoiseArgs {
  double arm_length = 40.0;
  double rate = 2.5e7;
  double duration = 0.01;
  std::optional<std::uint64_t> seed;
  double window_factor = 2.0;
  std::size_t ensemble = 1;
  unsigned threads = 1;
  std::string out;
};

/// Sample variance of each ensemble member, fanned out over worker threads.
std::vector<double> ensemble_variances(const NoiseArgs& a, std::uint64_t master, const PlanckScale& scale,
                                       const NoiseOptions& options) {
  std::vector<double> result(a.ensemble);
  const unsigned workers = std::max(1u, std::min<unsigned>(a.threads, static_cast<unsigned>(a.ensemble)));
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < a.ensemble; k += workers) {
            const auto s = generate_timeseries(a.arm_length, a.rate, a.duration, derive_stream_seed(master, k), scale,
                                               options);
            result[k] = sample_variance(s.samples());
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return result;
}

void run_noise(const NoiseArgs& a, const Context& ctx) {
  const PlanckScale scale;
  const NoiseOptions options{a.window_factor};
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  if (a.ensemble == 0) throw Error(ErrorKind::invalid_input, "ensemble size must be at least 1");
  const double expected_variance = transverse_variance_formula(a.arm_length, scale);

  RunManifest manifest;
  manifest.command = "noise";
  manifest.seed = seed;
  manifest.parameters = {{"arm-length", format_double(a.arm_length)},
                         {"rate", format_double(a.rate)},
                         {"duration", format_double(a.duration)},
                         {"window-factor", format_double(a.window_factor)},
                         {"ensemble", std::to_string(a.ensemble)}};

  std::vector<std::pair<std::string, Value>> items;
  if (a.ensemble == 1) {
    const NoiseSeries series = generate_timeseries(a.arm_length, a.rate, a.duration, seed, scale, options);
    const double var = sample_variance(series.samples());
    items = {{"samples", static_cast<std::uint64_t>(series.size())},
             {"sample_rate_hz", series.sample_rate()},
             {"coherence_time_s", series.coherence_time()},
             {"sample_variance_m2", var},
             {"rms_m", std::sqrt(var)},
             {"expected_rms_m", std::sqrt(expected_variance)},
             {"seed", seed}};
    if (!a.out.empty()) {
      auto f = open_output(a.out);
      write_series_csv(f, series);
      finish_output(f, a.out);
      manifest.output_paths.push_back(a.out);
    }
  } else {
    if (!a.out.empty()) throw Error(ErrorKind::invalid_input, "--out writes a single series; omit --ensemble");
    const auto vars = ensemble_variances(a, seed, scale, options);
    const double n = static_cast<double>(vars.size());
    double mean = 0.0;
    for (double v : vars) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : vars) ss += (v - mean) * (v - mean);
    const double stderr_mean = std::sqrt(ss / (n - 1.0) / n);
    items = {{"ensemble", static_cast<std::uint64_t>(vars.size())},
             {"mean_sample_variance_m2", mean},
             {"standard_error_m2", stderr_mean},
             {"expected_variance_m2", expected_variance},
             {"z_score", stderr_mean > 0.0 ? (mean - expected_variance) / stderr_mean : 0.0},
             {"seed", seed}};
  }
  print_table(*ctx.out, key_value_table(items), ctx.as_json);
  write_manifest(ctx, std::move(manifest));
}

// --- spectrum --------------------------------------------------------------

struct SpectrumArgs {
  std::string in;
  double arm_length = 40.0;
  double rate = 2.5e7;
  double duration = 0.01;
  std::optional<std::uint64_t> seed;
  double window_factor = 2.0;
  std::size_t segment_length = 4096;
  double overlap = 0.5;
  std::string out;
};

void run_spectrum(const SpectrumArgs& a, const Context& ctx) {
  const PlanckScale scale;
  RunManifest manifest;
  manifest.command = "spectrum";
  manifest.parameters = {{"segment-length", std::to_string(a.segment_length)}, {"overlap", format_double(a.overlap)}};

  std::vector<double> samples;
  double rate = 0.0;
  std::optional<double> arm_length;
  if (!a.in.empty()) {
    std::ifstream f(a.in);
    if (!f) throw std::runtime_error("cannot open " + a.in);
    RawSeries raw = read_series_csv(f);
    if (raw.values.size() < 2) throw Error(ErrorKind::insufficient_data, "series needs at least 2 samples");
    rate = static_cast<double>(raw.times.size() - 1) / (raw.times.back() - raw.times.front());
    if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorKind::parse, "time column must increase");
    samples = std::move(raw.values);
    manifest.parameters["in"] = a.in;
  } else {
    const std::uint64_t seed = a.seed ? *a.seed : default_seed();
    const NoiseSeries series =
        generate_timeseries(a.arm_length, a.rate, a.duration, seed, scale, NoiseOptions{a.window_factor});
    samples = series.samples();
    rate = series.sample_rate();
    arm_length = a.arm_length;
    manifest.seed = seed;
    manifest.parameters["arm-length"] = format_double(a.arm_length);
    manifest.parameters["rate"] = format_double(a.rate);
    manifest.parameters["duration"] = format_double(a.duration);
    manifest.parameters["window-factor"] = format_double(a.window_factor);
  }

  const SpectrumEstimate est = welch_psd(samples, rate, a.segment_length, a.overlap);
  const double variance = sample_variance(samples);
  double power = 0.0;
  const double df = rate / static_cast<double>(a.segment_length);
  for (double p : est.psd) power += p * df;

  std::vector<std::pair<std::string, Value>> items{{"samples", static_cast<std::uint64_t>(samples.size())},
                                                    {"sample_rate_hz", rate},
                                                    {"segment_count", static_cast<std::uint64_t>(est.segment_count)},
                                                    {"segment_length", static_cast<std::uint64_t>(est.segment_length)},
                                                    {"frequency_step_hz", df},
                                                    {"integrated_psd_m2", power},
                                                    {"sample_variance_m2", variance}};
  if (arm_length) {
    items.emplace_back("analytic_psd_at_zero_m2_per_hz", analytic_psd(*arm_length, 0.0, scale, {a.window_factor}));
  }
  if (!a.out.empty()) {
    auto f = open_output(a.out);
    write_spectrum_csv(f, est);
    finish_output(f, a.out);
    manifest.output_paths.push_back(a.out);
  }
  print_table(*ctx.out, key_value_table(items), ctx.as_json);
  write_manifest(ctx, std::move(manifest));
}

// --- interferometer --------------------------------------------------------

struct ApparatusArgs {
  std::string config;
  std::optional<double> arm_length;
  std::string position;
  std::string label;
};

struct InterferometerArgs {
  ApparatusArgs a;
  ApparatusArgs b;
  double f_max = 0.0;
  std::size_t points = 2001;
  std::optional<double> floor;
  double band_lo = 1.0e6;
  double band_hi = 5.0e6;
  double integration_time = 3600.0;
  std::string out;
};

bool apparatus_given(const ApparatusArgs& a) {
  return !a.config.empty() || a.arm_length.has_value() || !a.position.empty() || !a.label.empty();
}

InterferometerConfig resolve_apparatus(const ApparatusArgs& a, const char* default_label) {
  InterferometerConfig cfg;
  cfg.label = default_label;
  bool have_arm = false;
  if (!a.config.empty()) {
    cfg = load_interferometer_config(a.config);
    have_arm = true;
  }
  if (a.arm_length) {
    cfg.arm_length = *a.arm_length;
    have_arm = true;
  }
  if (!a.position.empty()) cfg.position = parse_vec3(a.position, "position");
  if (!a.label.empty()) cfg.label = a.label;
  if (!have_arm) throw Error(ErrorKind::invalid_input, "apparatus needs --config or --arm-length");
  cfg.validate();
  return cfg;
}

void record_apparatus(RunManifest& m, const InterferometerConfig& cfg, const std::string& suffix) {
  m.parameters["arm-length" + suffix] = format_double(cfg.arm_length);
  m.parameters["position" + suffix] = vec3_text(cfg.position);
  m.parameters["label" + suffix] = cfg.label;
}

void run_interferometer(const InterferometerArgs& a, const Context& ctx) {
  const PlanckScale scale;
  const InterferometerConfig first = resolve_apparatus(a.a, "a");
  const bool pair = apparatus_given(a.b);
  const std::optional<InterferometerConfig> second =
      pair ? std::optional(resolve_apparatus(a.b, "b")) : std::nullopt;

  RunManifest manifest;
  manifest.command = "interferometer";
  record_apparatus(manifest, first, "");
  if (second) record_apparatus(manifest, *second, "-b");

  const double knee = knee_frequency(first.arm_length, scale);
  const double f_max = a.f_max > 0.0 ? a.f_max : 10.0 * knee;
  if (a.points < 2) throw Error(ErrorKind::invalid_grid, "need at least 2 grid points");
  manifest.parameters["f-max"] = format_double(f_max);
  manifest.parameters["points"] = std::to_string(a.points);

  std::vector<double> grid(a.points);
  for (std::size_t i = 0; i < a.points; ++i) grid[i] = f_max * static_cast<double>(i) / static_cast<double>(a.points - 1);

  std::vector<std::pair<std::string, Value>> items{{"label", first.label},
                                                    {"arm_length_m", first.arm_length},
                                                    {"rms_m", predict_rms(first, scale)},
                                                    {"knee_frequency_hz", knee},
                                                    {"drift_velocity_m_per_s", drift_velocity_scale(first.arm_length, scale)}};
  SpectrumEstimate spectrum;
  if (second) {
    items.emplace_back("label_b", second->label);
    items.emplace_back("arm_length_b_m", second->arm_length);
    items.emplace_back("separation_m", norm(first.position - second->position));
    items.emplace_back("overlap_factor", overlap_factor(first, *second));
    spectrum = cross_spectrum(first, *second, grid, scale);
  } else {
    spectrum = predict_output_psd(first, grid, scale);
  }
  items.emplace_back("integrated_psd_m2", integrate_psd(spectrum));

  if (a.floor) {
    const DetectabilityReport r = detectability(first, *a.floor, a.band_lo, a.band_hi, a.integration_time, scale);
    manifest.parameters["floor"] = format_double(*a.floor);
    manifest.parameters["band-lo"] = format_double(a.band_lo);
    manifest.parameters["band-hi"] = format_double(a.band_hi);
    manifest.parameters["integration-time"] = format_double(a.integration_time);
    items.emplace_back("band_lo_hz", r.band_lo);
    items.emplace_back("band_hi_hz", r.band_hi);
    items.emplace_back("instrument_floor_m2_per_hz", r.instrument_floor);
    items.emplace_back("band_power_m2", r.band_power);
    items.emplace_back("snr_proxy", r.snr_proxy);
    items.emplace_back("verdict", std::string(to_string(r.verdict)));
  }
  if (!a.out.empty()) {
    auto f = open_output(a.out);
    write_spectrum_csv(f, spectrum);
    finish_output(f, a.out);
    manifest.output_paths.push_back(a.out);
  }
  print_table(*ctx.out, key_value_table(items), ctx.as_json);
  write_manifest(ctx, std::move(manifest));
}

// --- bounds ----------------------------------------------------------------

struct BoundsArgs {
  std::optional<double> mass;
  std::optional<double> size;
  double mass_min = 1.0e-31;
  double mass_max = 1.0e31;
  std::size_t points = 1000;
  std::string convention = "reduced";
  std::string out;
};

void run_bounds(const BoundsArgs& a, const Context& ctx) {
  const PlanckScale scale;
  ComptonConvention convention = ComptonConvention::reduced;
  if (a.convention == "planck") {
    convention = ComptonConvention::planck;
  } else if (a.convention != "reduced") {
    throw Error(ErrorKind::invalid_input, "--convention must be reduced or planck");
  }
  RunManifest manifest;
  manifest.command = "bounds";
  manifest.parameters["convention"] = a.convention;

  std::vector<double> masses;
  if (a.mass) {
    require_mass(*a.mass);
    masses.push_back(*a.mass);
    manifest.parameters["mass"] = format_double(*a.mass);
  } else {
    require_mass(a.mass_min);
    require_mass(a.mass_max);
    if (!(a.mass_max > a.mass_min) || a.points < 2) {
      throw Error(ErrorKind::invalid_input, "mass grid needs mass-max > mass-min and at least 2 points");
    }
    const double lo = std::log10(a.mass_min);
    const double hi = std::log10(a.mass_max);
    for (std::size_t i = 0; i < a.points; ++i) {
      masses.push_back(std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(a.points - 1)));
    }
    manifest.parameters["mass-min"] = format_double(a.mass_min);
    manifest.parameters["mass-max"] = format_double(a.mass_max);
    manifest.parameters["points"] = std::to_string(a.points);
  }

  Table curves{{"mass_kg", "compton_m", "schwarzschild_m"}, {}};
  for (double m : masses) {
    curves.rows.push_back({m, compton_size(m, scale, convention), schwarzschild_radius(m, scale)});
  }

  if (!a.out.empty()) {
    auto f = open_output(a.out);
    std::ostringstream body;
    print_table(body, curves, false);
    f << body.str();
    finish_output(f, a.out);
    manifest.output_paths.push_back(a.out);
  }

  if (a.size) {
    if (!a.mass) throw Error(ErrorKind::invalid_input, "--size needs --mass");
    manifest.parameters["size"] = format_double(*a.size);
    const RegimeClassification c = classify(*a.mass, *a.size, scale, convention);
    const double cross = intersection_scale(scale, convention);
    print_table(*ctx.out,
                key_value_table({{"mass_kg", *a.mass},
                                 {"size_m", *a.size},
                                 {"compton_m", c.compton},
                                 {"schwarzschild_m", c.schwarzschild},
                                 {"regime", std::string(to_string(c.regime))},
                                 {"intersection_m", cross},
                                 {"intersection_over_planck_length", cross / scale.planck_length()}}),
                ctx.as_json);
  } else if (a.out.empty()) {
    print_table(*ctx.out, curves, ctx.as_json);
  } else {
    const double cross = intersection_scale(scale, convention);
    print_table(*ctx.out,
                key_value_table({{"rows", static_cast<std::uint64_t>(masses.size())},
                                 {"intersection_mass_kg", intersection_mass(scale, convention)},
                                 {"intersection_m", cross},
                                 {"intersection_over_planck_length", cross / scale.planck_length()}}),
                ctx.as_json);
  }
  write_manifest(ctx, std::move(manifest));
}

// --- manifest replay -------------------------------------------------------

bool mentions_flag(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& s) { return s == flag || s.rfind(flag + "=", 0) == 0; });
}

const std::vector<std::string> subcommands{"algebra", "noise", "spectrum", "interferometer", "bounds"};

/// Expands `--manifest FILE` into the recorded subcommand and flags; flags
/// given explicitly on the command line win.
std::vector<std::string> expand_manifest(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--manifest") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--manifest", 1, 0);
      path = args[++i];
    } else if (args[i].rfind("--manifest=", 0) == 0) {
      path = args[i].substr(11);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return args;

  const RunManifest m = load_manifest(path);
  auto cmd = std::find_first_of(rest.begin(), rest.end(), subcommands.begin(), subcommands.end());
  std::vector<std::string> expanded;
  std::vector<std::string> tail;
  if (cmd == rest.end()) {
    expanded = rest;  // global flags
    expanded.push_back(m.command);
  } else {
    if (*cmd != m.command) throw CLI::ValidationError("--manifest", "manifest was written by '" + m.command + "'");
    expanded.assign(rest.begin(), std::next(cmd));
    tail.assign(std::next(cmd), rest.end());
  }
  for (const auto& [key, value] : m.parameters) {
    if (mentions_flag(rest, key)) continue;
    if (value == "true") {
      expanded.push_back("--" + key);
    } else if (value != "false") {
      expanded.push_back("--" + key);
      expanded.push_back(value);
    }
  }
  if (m.seed && !mentions_flag(rest, "seed")) {
    expanded.push_back("--seed");
    expanded.push_back(std::to_string(*m.seed));
  }
  expanded.insert(expanded.end(), tail.begin(), tail.end());
  return expanded;
}

}  // namespace

std::string to_json(const RunManifest& m) {
  json j = json::object();
  j["command"] = m.command;
  j["parameters"] = json::object();
  for (const auto& [k, v] : m.parameters) j["parameters"][k] = v;
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  j["tool_version"] = m.tool_version;
  j["output_paths"] = m.output_paths;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) m.parameters[k] = v.get<std::string>();
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    m.tool_version = j.value("tool_version", "");
    if (j.contains("output_paths")) m.output_paths = j["output_paths"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed manifest: ") + e.what());
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::parse, "cannot open manifest " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return manifest_from_json(ss.str());
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-geometry toolkit: position algebra, holographic noise and Planck bounds", "qgeom"};
  app.set_version_flag("--version", qgeom::version);
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  ctx.out = &out;
  app.add_flag("--json", ctx.as_json, "Print tabular output as JSON");
  app.add_option("--manifest-out", ctx.manifest_out, "Write the run manifest here");
  // Consumed by expand_manifest; declared for --help.
  std::string manifest_in;
  app.add_option("--manifest", manifest_in, "Re-run from a manifest; explicit flags override it");

  AlgebraArgs alg;
  auto* algebra = app.add_subcommand("algebra", "Build the spin-j position algebra and check it");
  algebra->add_option("--spin", alg.spin, "Spin j: integer, n/2 or decimal")->required();
  algebra->add_flag("--check", alg.check, "Compute commutator, Hermiticity and Casimir residuals");
  algebra->add_flag("--formula-only", alg.formula_only, "Closed forms only, no matrices");
  algebra->add_option("--axis", alg.axis, "Axis for the highest-weight state, x,y,z");
  algebra->add_option("--cap", alg.cap, "Dense dimension cap");
  algebra->add_option("--length", alg.length, "Separation L (m) for the direction/transverse formulas");
  algebra->add_option("--dump", alg.dump, "Write a component matrix as CSV (row,col,re,im)");
  algebra->add_option("--matrix", alg.matrix, "Component to dump: x1, x2 or x3");

  NoiseArgs noise_args;
  auto* noise = app.add_subcommand("noise", "Generate a holographic-noise displacement series");
  noise->add_option("--arm-length", noise_args.arm_length, "Arm length L (m)");
  noise->add_option("--rate", noise_args.rate, "Sample rate (Hz)");
  noise->add_option("--duration", noise_args.duration, "Duration (s)");
  noise->add_option("--seed", noise_args.seed, "RNG seed (default: $QGEOM_SEED or 0)");
  noise->add_option("--window-factor", noise_args.window_factor, "Coherence window in units of L/c");
  noise->add_option("--ensemble", noise_args.ensemble, "Number of independent streams");
  noise->add_option("--threads", noise_args.threads, "Worker threads for ensembles");
  noise->add_option("--out", noise_args.out, "Series CSV (t_s,x_m)");

  SpectrumArgs spec_args;
  auto* spectrum = app.add_subcommand("spectrum", "Welch PSD of a series file or a generated series");
  spectrum->add_option("--in", spec_args.in, "Series CSV to analyse");
  spectrum->add_option("--arm-length", spec_args.arm_length, "Arm length L (m) when generating");
  spectrum->add_option("--rate", spec_args.rate, "Sample rate (Hz) when generating");
  spectrum->add_option("--duration", spec_args.duration, "Duration (s) when generating");
  spectrum->add_option("--seed", spec_args.seed, "RNG seed when generating");
  spectrum->add_option("--window-factor", spec_args.window_factor, "Coherence window in units of L/c");
  spectrum->add_option("--segment-length", spec_args.segment_length, "Welch segment length (power of two)");
  spectrum->add_option("--overlap", spec_args.overlap, "Segment overlap fraction");
  spectrum->add_option("--out", spec_args.out, "Spectrum CSV (f_hz,psd_m2_per_hz)");

  InterferometerArgs ifo;
  auto* interferometer = app.add_subcommand("interferometer", "Predicted jitter, spectra and detectability");
  interferometer->add_option("--config", ifo.a.config, "Apparatus file (label, arm_length_m, position_m)");
  interferometer->add_option("--arm-length", ifo.a.arm_length, "Arm length (m); overrides the config file");
  interferometer->add_option("--position", ifo.a.position, "Position x,y,z (m)");
  interferometer->add_option("--label", ifo.a.label, "Label");
  interferometer->add_option("--config-b", ifo.b.config, "Second apparatus: output becomes the cross spectrum");
  interferometer->add_option("--arm-length-b", ifo.b.arm_length, "Second arm length (m)");
  interferometer->add_option("--position-b", ifo.b.position, "Second position x,y,z (m)");
  interferometer->add_option("--label-b", ifo.b.label, "Second label");
  interferometer->add_option("--f-max", ifo.f_max, "Grid upper frequency (Hz); default 10 x knee");
  interferometer->add_option("--points", ifo.points, "Grid points");
  interferometer->add_option("--floor", ifo.floor, "Instrument floor (m^2/Hz); enables detectability");
  interferometer->add_option("--band-lo", ifo.band_lo, "Band lower edge (Hz)");
  interferometer->add_option("--band-hi", ifo.band_hi, "Band upper edge (Hz)");
  interferometer->add_option("--integration-time", ifo.integration_time, "Integration time (s)");
  interferometer->add_option("--out", ifo.out, "Spectrum CSV (f_hz,psd_m2_per_hz)");

  BoundsArgs bnd;
  auto* bounds = app.add_subcommand("bounds", "Compton and Schwarzschild lines, regime classification");
  bounds->add_option("--mass", bnd.mass, "Single mass (kg)");
  bounds->add_option("--size", bnd.size, "System size (m) to classify with --mass");
  bounds->add_option("--mass-min", bnd.mass_min, "Grid lower mass (kg)");
  bounds->add_option("--mass-max", bnd.mass_max, "Grid upper mass (kg)");
  bounds->add_option("--points", bnd.points, "Log-spaced grid points");
  bounds->add_option("--convention", bnd.convention, "Quantum line: reduced (hbar/mc) or planck (h/mc)");
  bounds->add_option("--out", bnd.out, "Curves CSV (mass_kg,compton_m,schwarzschild_m)");

  try {
    std::vector<std::string> args = expand_manifest(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "qgeom: " << e.what() << '\n';
    return 1;
  }

  try {
    if (algebra->parsed()) run_algebra(alg, ctx);
    if (noise->parsed()) run_noise(noise_args, ctx);
    if (spectrum->parsed()) run_spectrum(spec_args, ctx);
    if (interferometer->parsed()) run_interferometer(ifo, ctx);
    if (bounds->parsed()) run_bounds(bnd, ctx);
  } catch (const std::exception& e) {
    err << "qgeom: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qgeom::cli
