// Command-line front end: density, field, transmit, infer, sweep.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tonks/commands.hpp"
#include "tonks/errors.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::string engine;
  std::string index_mode;
  unsigned workers = 0;
};

tonks::RunConfig resolve(const Overrides& o) {
  auto cfg = o.config_path.empty() ? tonks::RunConfig::defaults() : tonks::load_run_config(o.config_path);
  try {
    if (!o.engine.empty()) cfg.numerics.engine = tonks::parse_engine(o.engine);
    if (!o.index_mode.empty()) cfg.numerics.index_mode = tonks::parse_index_mode(o.index_mode);
  } catch (const std::invalid_argument& e) {
    throw tonks::ConfigError(e.what());
  }
  if (!o.out_dir.empty()) cfg.output_directory = o.out_dir;
  if (o.workers > 0) cfg.numerics.workers = o.workers;
  cfg.validate();
  return cfg;
}

/// Comma separated numbers; empty entries are skipped so "" is an empty list.
std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(first), &used);
      if (item.find_first_not_of(" \t", first + used) != std::string::npos) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw tonks::ConfigError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tonks-Girardeau gas density, probe transmission and spectral inversion"};
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config_path, "key = value run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out_dir, "output directory (overrides output.directory)");
  app.add_option("--engine", o.engine, "helmholtz | wkb2 | analytic");
  app.add_option("--index-mode", o.index_mode, "exact | second-order");
  app.add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);

  std::string times;
  auto* density = app.add_subcommand("density", "density profiles at the given times plus the average");
  auto* times_opt = density->add_option("--times", times, "times in seconds, comma separated");

  double field_time = 0.0;
  auto* field = app.add_subcommand("field", "probe field through the cloud at one time");
  field->add_option("--times", field_time, "time in seconds");

  auto* transmit = app.add_subcommand("transmit", "transmission time series and harmonic spectrum");

  std::string target = "atoms";
  std::string signal;
  auto* infer = app.add_subcommand("infer", "invert a transmission signal");
  infer->add_option("--target", target, "atoms | coefficients");
  infer->add_option("--signal", signal, "CSV of t_seconds,transmission")->check(CLI::ExistingFile);

  std::string axis;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "forward model and inversion over a parameter list");
  sweep->add_option("--axis", axis, "atom_count | detuning | coefficient")->required();
  sweep->add_option("--values", values, "comma separated; detuning in Hz");

  app.add_subcommand("defaults", "print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("defaults")) {
      std::cout << tonks::format_run_config(tonks::RunConfig::defaults());
      return 0;
    }
    const auto cfg = resolve(o);
    if (density->parsed()) {
      const auto list = times_opt->count() == 0 ? tonks::default_density_times(cfg)
                                                : parse_list(times, "--times");
      tonks::cmd_density(cfg, list, std::cout);
    } else if (field->parsed()) {
      tonks::cmd_field(cfg, field_time, std::cout);
    } else if (transmit->parsed()) {
      tonks::cmd_transmit(cfg, std::cout);
    } else if (infer->parsed()) {
      std::optional<std::filesystem::path> path;
      if (!signal.empty()) path = signal;
      tonks::cmd_infer(cfg, tonks::parse_infer_target(target), path, std::cout);
    } else if (sweep->parsed()) {
      const auto list = parse_list(values, "--values");
      tonks::cmd_sweep(cfg, tonks::parse_sweep_axis(axis), list, std::cout);
    }
  } catch (const tonks::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return tonks::exit_code::config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return tonks::exit_code::config;
  } catch (const tonks::InversionError& e) {
    std::cerr << "inversion error: " << e.what() << '\n';
    return tonks::exit_code::inversion;
  } catch (const tonks::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return tonks::exit_code::numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return 0;
}
