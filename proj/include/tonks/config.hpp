#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tonks/optics.hpp"

namespace tonks {

struct NumericsConfig {
  double extent_margin = 6.0;
  double points_per_unit = 16.0;
  double samples_per_wavelength = 64.0;
  int samples_per_period = 256;
  int periods = 1;
  Engine engine = Engine::helmholtz;
  IndexMode index_mode = IndexMode::exact_sqrt;
  int harmonics = 4;  // s_max of the spectrum
  int search_max_atoms = 200;
  unsigned workers = 1;
};

/// Everything a command needs. SI units throughout.
struct RunConfig {
  TrapConfig trap;
  SuperpositionState state;
  OpticalConfig optics;
  NumericsConfig numerics;
  std::filesystem::path output_directory = "out";

  /// 87Rb worked example: N = 30, c0 = c1 = 1/sqrt(2), D1 line probe
  /// detuned by 2 pi x 90 MHz, 2 pi x 100 Hz trap.
  static RunConfig defaults();

  /// Throws ConfigError on the first invalid field.
  void validate() const;
  TimeseriesOptions timeseries_options() const;
};

/// Parses `key = value` lines on top of `base`; `#` starts a comment.
/// Unknown keys and malformed values throw ConfigError.
RunConfig parse_run_config(std::istream& in, RunConfig base = RunConfig::defaults());
RunConfig load_run_config(const std::filesystem::path& path);

/// The full key list with current values, in parseable form.
std::string format_run_config(const RunConfig& cfg);

}  // namespace tonks
