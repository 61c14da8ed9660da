#include "tonks/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "tonks/constants.hpp"
#include "tonks/errors.hpp"
#include "tonks/parallel.hpp"

namespace tonks {

namespace {

/// Collects the files a command writes and deletes them again unless the
/// command reaches commit().
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    if (committed_) return;
    for (const auto& p : written_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    written_.push_back(path);
    body(out);
    out.flush();
    if (!out) throw NumericalError("write to " + path.string() + " failed");
  }

  FileList commit() {
    committed_ = true;
    return written_;
  }

 private:
  std::filesystem::path dir_;
  FileList written_;
  bool committed_ = false;
};

int detuning_sign(const OpticalConfig& opt) { return opt.detuning > 0.0 ? 1 : -1; }

struct Modulation {
  double alpha;
  double zeta;
};

/// alpha and zeta from the spectrum, or nothing when the 2 omega line is
/// below the noise floor (a pure state).
std::optional<Modulation> read_modulation(const TransmissionSpectrum& spectrum, int sign) {
  constexpr double noise_floor = 1e-13;
  if (!(std::abs(spectrum.harmonics.at(1)) > noise_floor * std::abs(spectrum.harmonics.at(0))))
    return std::nullopt;
  const double alpha = extract_alpha(spectrum, sign, noise_floor);
  return Modulation{alpha, extract_zeta(spectrum, alpha)};
}

double mixing_product(const SuperpositionState& s) { return std::min(0.5, s.mag_c0 * s.mag_c1); }

std::string csv_field(const std::optional<double>& v) {
  if (!v) return {};
  std::ostringstream out;
  out.precision(17);
  out << *v;
  return out.str();
}

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + '"';
}

}  // namespace

InferTarget parse_infer_target(std::string_view text) {
  if (text == "atoms") return InferTarget::atoms;
  if (text == "coefficients") return InferTarget::coefficients;
  throw ConfigError("unknown inference target '" + std::string(text) + "'");
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "atom_count") return SweepAxis::atom_count;
  if (text == "detuning") return SweepAxis::detuning;
  if (text == "coefficient") return SweepAxis::coefficient;
  throw ConfigError("unknown sweep axis '" + std::string(text) + "'");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::atom_count: return "atom_count";
    case SweepAxis::detuning: return "detuning";
    case SweepAxis::coefficient: return "coefficient";
  }
  return "unknown";
}

std::vector<double> default_density_times(const RunConfig& config) {
  const double w = config.trap.trap_angular_frequency;
  return {0.0, 0.5 * constants::pi / w, constants::pi / w};
}

FileList cmd_density(const RunConfig& config, std::span<const double> times, std::ostream& log) {
  config.validate();
  for (double t : times)
    if (!std::isfinite(t)) throw ConfigError("density times must be finite");

  const auto& trap = config.trap;
  const auto grid = default_density_grid(trap.atom_count, config.numerics.extent_margin,
                                         config.numerics.points_per_unit);
  const auto parts = parity_decomposition(trap, config.state, grid);
  const double n = trap.atom_count;

  OutputSet out(config.output_directory);
  log.precision(17);
  log << "normalization (N = " << trap.atom_count << ")\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto profile =
        instantaneous_density(parts, trap.trap_angular_frequency * times[i] + config.state.relative_phase);
    const double total = profile.integral();
    log << "  t = " << times[i] << " s: integral = " << total
        << ", relative error = " << (total - n) / n << '\n';
    out.write("density_t" + std::to_string(i) + ".csv",
              [&](std::ostream& os) { write_density_csv(os, profile, trap); });
  }
  const auto average = average_density(trap, grid);
  const double total = average.integral();
  log << "  average: integral = " << total << ", relative error = " << (total - n) / n << '\n';
  out.write("density_average.csv", [&](std::ostream& os) { write_density_csv(os, average, trap); });
  return out.commit();
}

FieldSummary cmd_field(const RunConfig& config, double t, std::ostream& log) {
  config.validate();
  if (!std::isfinite(t)) throw ConfigError("field time must be finite");
  const auto& trap = config.trap;
  const auto options = config.timeseries_options();
  const auto grid = optical_grid(trap, config.optics, options);
  const auto parts = parity_decomposition(trap, config.state, grid);
  const auto density =
      instantaneous_density(parts, trap.trap_angular_frequency * t + config.state.relative_phase);
  const auto profile = build_index_profile(density, trap, config.optics, options.index_mode);
  const auto numeric = solve_helmholtz(profile, config.optics);
  const auto wkb = wkb_field(profile, config.optics);

  double diff = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < numeric.amplitude.size(); ++j) {
    const double a = std::abs(numeric.amplitude[j]);
    const double b = std::abs(wkb.amplitude[j]);
    diff += (a - b) * (a - b);
    norm += a * a;
  }

  FieldSummary summary;
  summary.transmission = numeric.transmission();
  summary.reflection = numeric.reflection();
  summary.wkb_transmission = wkb_transmission(profile, config.optics);
  summary.wkb_deviation = std::sqrt(diff / norm);
  summary.warnings = numeric.warnings;
  summary.warnings.insert(summary.warnings.end(), wkb.warnings.begin(), wkb.warnings.end());

  OutputSet out(config.output_directory);
  out.write("field_helmholtz.csv", [&](std::ostream& os) { write_field_csv(os, numeric, density, trap); });
  out.write("field_wkb2.csv", [&](std::ostream& os) { write_field_csv(os, wkb, density, trap); });

  log.precision(17);
  log << "t = " << t << " s\n"
      << "|t|^2 = " << summary.transmission << '\n'
      << "|r|^2 = " << summary.reflection << '\n'
      << "|t|^2 + |r|^2 = " << summary.transmission + summary.reflection << '\n'
      << "T (wkb2) = " << summary.wkb_transmission << '\n'
      << "wkb relative L2 deviation of |E| = " << summary.wkb_deviation << '\n';
  for (const auto& w : summary.warnings) log << "warning: " << w << '\n';
  summary.files = out.commit();
  return summary;
}

TransmitSummary cmd_transmit(const RunConfig& config, std::ostream& log) {
  config.validate();
  TransmitSummary summary;
  summary.analytic = analytic_transmission_params(config.trap, config.state, config.optics);
  const auto record =
      transmission_timeseries(config.trap, config.state, config.optics, config.timeseries_options());
  summary.spectrum = dft_harmonics(record, config.numerics.harmonics);

  log.precision(17);
  log << "engine = " << to_string(config.numerics.engine) << '\n'
      << "T_N = " << summary.analytic.t_n << '\n'
      << "zeta (analytic) = " << summary.analytic.zeta << '\n';
  try {
    if (const auto m = read_modulation(summary.spectrum, detuning_sign(config.optics))) {
      summary.alpha_spectral = m->alpha;
      summary.zeta_spectral = m->zeta;
      log << "zeta (spectral) = " << m->zeta << '\n'
          << "zeta relative difference = " << (m->zeta - summary.analytic.zeta) / summary.analytic.zeta
          << '\n'
          << "alpha (spectral) = " << m->alpha << '\n';
    } else {
      log << "zeta (spectral) = 0 (no modulation above the noise floor)\n";
    }
  } catch (const InversionError& e) {
    log << "zeta (spectral) unavailable: " << e.what() << '\n';
  }

  OutputSet out(config.output_directory);
  out.write("transmission.csv", [&](std::ostream& os) { write_transmission_csv(os, record); });
  out.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, summary.spectrum); });
  summary.files = out.commit();
  return summary;
}

InferReport cmd_infer(const RunConfig& config, InferTarget target,
                      const std::optional<std::filesystem::path>& signal_path, std::ostream& log) {
  config.validate();
  TransmissionRecord record;
  std::string source;
  if (signal_path) {
    std::ifstream in(*signal_path);
    if (!in) throw ConfigError("cannot open signal file " + signal_path->string());
    record = read_transmission_csv(in, config.trap.trap_angular_frequency);
    source = signal_path->string();
  } else {
    record = transmission_timeseries(config.trap, config.state, config.optics,
                                     config.timeseries_options());
    source = "simulated (" + std::string(to_string(config.numerics.engine)) + ")";
  }
  const auto spectrum = dft_harmonics(record, config.numerics.harmonics);
  const auto modulation = read_modulation(spectrum, detuning_sign(config.optics));

  InferReport report;
  auto& result = report.result;
  if (target == InferTarget::coefficients) {
    if (modulation) {
      result = infer_coefficients(modulation->zeta, modulation->alpha, config.trap, config.optics);
    } else {
      result.coefficient_product = 0.0;
      result.populations = std::pair{1.0, 0.0};
      result.notes.push_back("pure state: no modulation above the noise floor");
    }
  } else {
    if (!modulation)
      throw InversionError("no modulation above the noise floor; the atom number is not observable");
    result = infer_atom_number(modulation->zeta, mixing_product(config.state), config.trap,
                               config.optics, config.numerics.search_max_atoms, config.numerics.workers);
    result.alpha_estimate = modulation->alpha;
  }

  std::ostringstream text;
  text.precision(17);
  text << "target = " << (target == InferTarget::atoms ? "atoms" : "coefficients") << '\n'
       << "source = " << source << '\n'
       << "samples = " << record.values.size() << '\n'
       << "zeta = " << result.zeta_estimate << '\n'
       << "alpha = " << result.alpha_estimate << '\n';
  if (result.atoms) {
    const auto& a = *result.atoms;
    text << "best_atom_count = " << a.best << '\n'
         << "best_residual = " << a.best_residual << '\n'
         << "runner_up_atom_count = " << a.runner_up << '\n'
         << "runner_up_residual = " << a.runner_up_residual << '\n';
  }
  if (result.coefficient_product) {
    text << (result.populations ? "coefficient_product = " : "assumed_coefficient_product = ")
         << *result.coefficient_product << '\n';
  }
  if (result.populations) {
    text << "population_candidates = " << result.populations->first << ", "
         << result.populations->second << '\n'
         << "product_clamped = " << (result.product_clamped ? "true" : "false") << '\n';
  }
  for (const auto& note : result.notes) text << "note = " << note << '\n';
  report.text = text.str();
  log << report.text;

  OutputSet out(config.output_directory);
  out.write("inference_report.txt", [&](std::ostream& os) { os << report.text; });
  report.files = out.commit();
  return report;
}

namespace {

/// Fills `row` as far as it gets, so a failed inversion keeps the forward
/// model columns.
void sweep_row(const RunConfig& base, SweepAxis axis, double value, SweepRow& row) {
  row.value = value;
  RunConfig c = base;
  c.numerics.workers = 1;
  switch (axis) {
    case SweepAxis::atom_count:
      if (!(value >= 1.0 && value == std::floor(value) && value <= 1e6))
        throw ConfigError("atom count must be a positive integer");
      c.trap.atom_count = static_cast<int>(value);
      break;
    case SweepAxis::detuning:
      c.optics.detuning = constants::two_pi * value;
      break;
    case SweepAxis::coefficient:
      if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("ground population must lie in [0, 1]");
      c.state = SuperpositionState::from_population(value, c.state.relative_phase);
      break;
  }
  c.validate();

  row.zeta_analytic = analytic_transmission_params(c.trap, c.state, c.optics).zeta;
  const auto record = transmission_timeseries(c.trap, c.state, c.optics, c.timeseries_options());
  const auto spectrum = dft_harmonics(record, c.numerics.harmonics);
  const auto modulation = read_modulation(spectrum, detuning_sign(c.optics));
  const double true_product = mixing_product(c.state);
  if (!modulation) {
    row.zeta_spectral = 0.0;
    if (axis == SweepAxis::atom_count)
      throw InversionError("no modulation above the noise floor; the atom number is not observable");
    row.inferred = 0.0;
    row.residual = -true_product;
    row.status = "ok (pure state)";
    return;
  }
  row.zeta_spectral = modulation->zeta;
  if (axis == SweepAxis::atom_count) {
    const auto result = infer_atom_number(modulation->zeta, true_product, c.trap, c.optics,
                                          c.numerics.search_max_atoms);
    row.inferred = result.atoms->best;
    row.residual = result.atoms->best - c.trap.atom_count;
  } else {
    const auto result = infer_coefficients(modulation->zeta, modulation->alpha, c.trap, c.optics);
    row.inferred = *result.coefficient_product;
    row.residual = *result.coefficient_product - true_product;
  }
  row.status = "ok";
}

}  // namespace

SweepTable cmd_sweep(const RunConfig& config, SweepAxis axis, std::span<const double> values,
                     std::ostream& log) {
  config.validate();
  SweepTable table;
  table.axis = axis;
  table.rows.resize(values.size());
  parallel_for(values.size(), config.numerics.workers, [&](std::size_t i) {
    try {
      sweep_row(config, axis, values[i], table.rows[i]);
    } catch (const std::exception& e) {
      table.rows[i].status = std::string("error: ") + e.what();
    }
  });

  OutputSet out(config.output_directory);
  out.write("sweep.csv", [&](std::ostream& os) {
    os.precision(17);
    os << "value,zeta_analytic,zeta_spectral,inferred,residual,status\n";
    for (const auto& r : table.rows)
      os << r.value << ',' << csv_field(r.zeta_analytic) << ',' << csv_field(r.zeta_spectral) << ','
         << csv_field(r.inferred) << ',' << csv_field(r.residual) << ',' << csv_quote(r.status) << '\n';
  });

  std::size_t failed = 0;
  for (const auto& r : table.rows) failed += r.status.rfind("error", 0) == 0 ? 1 : 0;
  log << "sweep over " << to_string(axis) << ": " << table.rows.size() << " values, " << failed
      << " failed\n";
  table.files = out.commit();
  return table;
}

}  // namespace tonks
