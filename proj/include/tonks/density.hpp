#pragma once

#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "tonks/oscillator.hpp"

namespace tonks {

/// Harmonic trap holding N hard-core bosons.
struct TrapConfig {
  int atom_count = 1;
  double trap_angular_frequency = 0.0;  // rad/s
  double atom_mass = 0.0;               // kg

  void validate() const;
  /// ell = sqrt(hbar / (m omega)), metres.
  double oscillator_length() const;
  /// x_T = sqrt(2N) ell, metres.
  double radius() const;
  /// sqrt(2N) in units of ell.
  double dimensionless_radius() const;
  /// Peak of the semicircle density, sqrt(2N)/(pi ell), per metre.
  double peak_average_density() const;
};

/// c0 |ground> + c1 |first excited>, stored as magnitudes plus the relative
/// phase alpha = arg(c1) - arg(c0).
struct SuperpositionState {
  double mag_c0 = 1.0;
  double mag_c1 = 0.0;
  double relative_phase = 0.0;

  /// State with |c0|^2 = ground_population.
  static SuperpositionState from_population(double ground_population, double relative_phase);
  void validate() const;
};

enum class DensityKind { ground, excited, cross, static_r0, oscillating_r1, instantaneous, average };

std::string_view to_string(DensityKind kind);

/// Density sampled on a dimensionless grid; values are in units of 1/ell.
///
/// `derivatives` holds d(values)/d(x/ell) when available analytically and is
/// empty otherwise (the semicircle average has a kink at its edge).
struct DensityProfile {
  DimensionlessGrid grid;
  std::vector<double> values;
  std::vector<double> derivatives;
  DensityKind kind;

  double integral() const;
};

/// R1 = int rho01^2 dx, R2 = int (rho01')^2 dx in SI units.
struct OverlapIntegrals {
  double r1_integral = 0.0;  // 1/m
  double r2_integral = 0.0;  // 1/m^3
  int atom_count = 0;
  // The same integrals in units of 1/ell and 1/ell^3.
  double r1_dimensionless = 0.0;
  double r2_dimensionless = 0.0;
};

/// Static and oscillating parts: rho(x, t) = r0(x) + r1(x) cos(omega t + alpha).
struct ParityParts {
  DensityProfile static_part;
  DensityProfile oscillating_part;
};

/// Default grid for N atoms: half-width sqrt(2N) + margin, points_per_unit
/// samples per ell, at least min_points points.
DimensionlessGrid default_density_grid(int atom_count, double margin = 6.0,
                                       double points_per_unit = 16.0,
                                       std::size_t min_points = 2048);

DensityProfile ground_density(const TrapConfig& cfg, const DimensionlessGrid& grid);
DensityProfile christoffel_darboux_density(const TrapConfig& cfg, const DimensionlessGrid& grid);
DensityProfile excited_density(const TrapConfig& cfg, const DimensionlessGrid& grid);
DensityProfile cross_density(const TrapConfig& cfg, const DimensionlessGrid& grid);

ParityParts parity_decomposition(const TrapConfig& cfg, const SuperpositionState& state,
                                 const DimensionlessGrid& grid);

/// rho(x, t) for t in seconds.
DensityProfile instantaneous_density(const TrapConfig& cfg, const SuperpositionState& state,
                                     const DimensionlessGrid& grid, double t);

/// Same, reusing a precomputed decomposition; `phase` is omega t + alpha.
DensityProfile instantaneous_density(const ParityParts& parts, double phase);

DensityProfile average_density(const TrapConfig& cfg, const DimensionlessGrid& grid);

OverlapIntegrals overlap_integrals(const TrapConfig& cfg);
OverlapIntegrals overlap_integrals(const TrapConfig& cfg, const DimensionlessGrid& grid);

/// CSV with header `x_over_xT,density_times_ell`.
void write_density_csv(std::ostream& out, const DensityProfile& profile, const TrapConfig& cfg);

}  // namespace tonks
