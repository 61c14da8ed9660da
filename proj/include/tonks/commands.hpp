#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tonks/config.hpp"
#include "tonks/inference.hpp"

namespace tonks {

enum class InferTarget { atoms, coefficients };
enum class SweepAxis { atom_count, detuning, coefficient };

InferTarget parse_infer_target(std::string_view text);
SweepAxis parse_sweep_axis(std::string_view text);
std::string_view to_string(SweepAxis axis);

/// Files written by a command, in creation order.
using FileList = std::vector<std::filesystem::path>;

/// {0, pi/(2 omega), pi/omega}: swing left, symmetric, swing right.
std::vector<double> default_density_times(const RunConfig& config);

/// density_<i>.csv per time plus density_average.csv.
FileList cmd_density(const RunConfig& config, std::span<const double> times, std::ostream& log);

struct FieldSummary {
  double transmission = 0.0;
  double reflection = 0.0;
  double wkb_transmission = 0.0;
  /// Relative L2 distance between the WKB and numerical |E(x)|.
  double wkb_deviation = 0.0;
  std::vector<std::string> warnings;
  FileList files;
};

/// field_helmholtz.csv and field_wkb2.csv at time t.
FieldSummary cmd_field(const RunConfig& config, double t, std::ostream& log);

struct TransmitSummary {
  AnalyticTransmission analytic;
  TransmissionSpectrum spectrum;
  std::optional<double> zeta_spectral;
  std::optional<double> alpha_spectral;
  FileList files;
};

/// transmission.csv and spectrum.csv.
TransmitSummary cmd_transmit(const RunConfig& config, std::ostream& log);

struct InferReport {
  InferenceResult result;
  std::string text;
  FileList files;
};

/// Inverts a recorded signal, or a forward simulation of `config` when no
/// signal file is given. The report goes to inference_report.txt.
InferReport cmd_infer(const RunConfig& config, InferTarget target,
                      const std::optional<std::filesystem::path>& signal_path, std::ostream& log);

struct SweepRow {
  double value = 0.0;
  std::optional<double> zeta_analytic;
  std::optional<double> zeta_spectral;
  std::optional<double> inferred;
  std::optional<double> residual;
  std::string status;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::atom_count;
  std::vector<SweepRow> rows;
  FileList files;
};

/// One forward simulation and inversion per value, written to sweep.csv.
/// Per-value failures land in the status column.
SweepTable cmd_sweep(const RunConfig& config, SweepAxis axis, std::span<const double> values,
                     std::ostream& log);

}  // namespace tonks
