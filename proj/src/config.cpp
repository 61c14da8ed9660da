#include "tonks/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tonks/constants.hpp"
#include "tonks/errors.hpp"

namespace tonks {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key + ": '" + text + "' is not a finite number");
  return v;
}

long to_integer(const std::string& key, const std::string& text) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": '" + text + "' is not an integer");
  return v;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"trap.atom_count",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.trap.atom_count = static_cast<int>(to_integer(k, v));
       }},
      {"trap.frequency_hz",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.trap.trap_angular_frequency = constants::two_pi * to_double(k, v);
       }},
      {"trap.atom_mass_kg",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.trap.atom_mass = to_double(k, v); }},
      {"state.ground_population",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const double p = to_double(k, v);
         if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(k + " must lie in [0, 1]");
         c.state = SuperpositionState::from_population(p, c.state.relative_phase);
       }},
      {"state.relative_phase",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.state.relative_phase = to_double(k, v);
       }},
      {"optics.wavelength_m",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.optics.vacuum_wavelength = to_double(k, v);
       }},
      {"optics.detuning_hz",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.optics.detuning = constants::two_pi * to_double(k, v);
       }},
      {"optics.linewidth_per_s",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.optics.linewidth = to_double(k, v); }},
      {"optics.dipole_moment_cm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.optics.dipole_moment = to_double(k, v);
       }},
      {"optics.areal_density_per_m2",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.optics.areal_density = to_double(k, v);
       }},
      {"numerics.extent_margin",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.numerics.extent_margin = to_double(k, v);
       }},
      {"numerics.points_per_unit",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.numerics.points_per_unit = to_double(k, v);
       }},
      {"numerics.samples_per_wavelength",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.numerics.samples_per_wavelength = to_double(k, v);
       }},
      {"numerics.samples_per_period",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.numerics.samples_per_period = static_cast<int>(to_integer(k, v));
       }},
      {"numerics.periods",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.numerics.periods = static_cast<int>(to_integer(k, v));
       }},
      {"numerics.engine",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.numerics.engine = parse_engine(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"numerics.index_mode",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.numerics.index_mode = parse_index_mode(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"numerics.harmonics",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.numerics.harmonics = static_cast<int>(to_integer(k, v));
       }},
      {"numerics.search_max_atoms",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.numerics.search_max_atoms = static_cast<int>(to_integer(k, v));
       }},
      {"numerics.workers",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const long w = to_integer(k, v);
         if (w < 1) throw ConfigError(k + " must be >= 1");
         c.numerics.workers = static_cast<unsigned>(w);
       }},
      {"output.directory",
       [](RunConfig& c, const std::string&, const std::string& v) { c.output_directory = v; }},
  };
  return table;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.trap.atom_count = 30;
  c.trap.trap_angular_frequency = constants::two_pi * 100.0;
  c.trap.atom_mass = constants::rb87_mass;
  c.state = SuperpositionState::from_population(0.5, 0.0);
  c.optics.vacuum_wavelength = 794.978e-9;
  c.optics.detuning = constants::two_pi * 90e6;
  c.optics.linewidth = 1.80647e7;
  c.optics.dipole_moment = 1.4651e-29;
  // One pencil per (400 nm)^2 lattice cell. Chosen here; not a measured value.
  c.optics.areal_density = 6.25e12;
  return c;
}

void RunConfig::validate() const {
  try {
    trap.validate();
    state.validate();
    optics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (optics.detuning == 0.0) throw ConfigError("optics.detuning_hz must be nonzero");
  if (2.0 * std::abs(optics.beta()) * trap.peak_average_density() >= 1.0)
    throw ConfigError("probe coupling too strong: |beta| rho exceeds the perturbative range");
  const auto& n = numerics;
  if (!(n.extent_margin >= 6.0)) throw ConfigError("numerics.extent_margin must be >= 6");
  if (!(n.points_per_unit > 0.0)) throw ConfigError("numerics.points_per_unit must be positive");
  if (!(n.samples_per_wavelength >= 40.0))
    throw ConfigError("numerics.samples_per_wavelength must be >= 40");
  if (n.samples_per_period < 16) throw ConfigError("numerics.samples_per_period must be >= 16");
  if (n.periods < 1) throw ConfigError("numerics.periods must be >= 1");
  if (n.harmonics < 2) throw ConfigError("numerics.harmonics must be >= 2");
  if (2L * n.harmonics * n.periods >= static_cast<long>(n.samples_per_period) * n.periods / 2)
    throw ConfigError("numerics.harmonics is above the Nyquist limit of the time sampling");
  if (n.search_max_atoms < 1) throw ConfigError("numerics.search_max_atoms must be >= 1");
  if (n.workers < 1) throw ConfigError("numerics.workers must be >= 1");
  if (output_directory.empty()) throw ConfigError("output.directory must not be empty");
}

TimeseriesOptions RunConfig::timeseries_options() const {
  TimeseriesOptions o;
  o.samples_per_period = numerics.samples_per_period;
  o.periods = numerics.periods;
  o.engine = numerics.engine;
  o.index_mode = numerics.index_mode;
  o.samples_per_wavelength = numerics.samples_per_wavelength;
  o.extent_margin = numerics.extent_margin;
  o.points_per_unit = numerics.points_per_unit;
  o.workers = numerics.workers;
  return o;
}

RunConfig parse_run_config(std::istream& in, RunConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value for " + key);
    it->second(base, key, value);
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_run_config(in);
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "trap.atom_count = " << c.trap.atom_count << '\n'
      << "trap.frequency_hz = " << c.trap.trap_angular_frequency / constants::two_pi << '\n'
      << "trap.atom_mass_kg = " << c.trap.atom_mass << '\n'
      << "state.ground_population = " << c.state.mag_c0 * c.state.mag_c0 << '\n'
      << "state.relative_phase = " << c.state.relative_phase << '\n'
      << "optics.wavelength_m = " << c.optics.vacuum_wavelength << '\n'
      << "optics.detuning_hz = " << c.optics.detuning / constants::two_pi << '\n'
      << "optics.linewidth_per_s = " << c.optics.linewidth << '\n'
      << "optics.dipole_moment_cm = " << c.optics.dipole_moment << '\n'
      << "optics.areal_density_per_m2 = " << c.optics.areal_density << '\n'
      << "numerics.extent_margin = " << c.numerics.extent_margin << '\n'
      << "numerics.points_per_unit = " << c.numerics.points_per_unit << '\n'
      << "numerics.samples_per_wavelength = " << c.numerics.samples_per_wavelength << '\n'
      << "numerics.samples_per_period = " << c.numerics.samples_per_period << '\n'
      << "numerics.periods = " << c.numerics.periods << '\n'
      << "numerics.engine = " << to_string(c.numerics.engine) << '\n'
      << "numerics.index_mode = " << to_string(c.numerics.index_mode) << '\n'
      << "numerics.harmonics = " << c.numerics.harmonics << '\n'
      << "numerics.search_max_atoms = " << c.numerics.search_max_atoms << '\n'
      << "numerics.workers = " << c.numerics.workers << '\n'
      << "output.directory = " << c.output_directory.string() << '\n';
  return out.str();
}

}  // namespace tonks
