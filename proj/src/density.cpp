#include "tonks/density.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tonks/constants.hpp"
#include "tonks/errors.hpp"
#include "tonks/quadrature.hpp"

namespace tonks {

namespace {

constexpr double kGridMargin = 6.0;

void require_covering_grid(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  const double needed = cfg.dimensionless_radius() + kGridMargin;
  // small slack so grids built from the same numbers always pass
  if (grid.back() < needed * (1.0 - 1e-12) || -grid.front() < needed * (1.0 - 1e-12))
    throw std::invalid_argument("density grid must span +-" + std::to_string(needed) +
                                " oscillator lengths for N=" + std::to_string(cfg.atom_count));
}

// Orbital sums shared by the ground, excited and cross densities.
struct OrbitalSums {
  std::vector<double> ground, ground_d;
  std::vector<double> excited, excited_d;
  std::vector<double> cross, cross_d;
};

OrbitalSums orbital_sums(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  cfg.validate();
  require_covering_grid(cfg, grid);
  const int n = cfg.atom_count;
  const EigenfunctionTable table(n, grid);
  const std::size_t m = grid.size();
  OrbitalSums s;
  s.ground.assign(m, 0.0);
  s.ground_d.assign(m, 0.0);
  for (int k = 0; k < n - 1; ++k) {
    const auto v = table.values(k);
    const auto d = table.derivatives(k);
    for (std::size_t j = 0; j < m; ++j) {
      s.ground[j] += v[j] * v[j];
      s.ground_d[j] += 2.0 * v[j] * d[j];
    }
  }
  // ground and excited share orbitals 0..N-2
  s.excited = s.ground;
  s.excited_d = s.ground_d;
  const auto top_v = table.values(n - 1);
  const auto top_d = table.derivatives(n - 1);
  const auto up_v = table.values(n);
  const auto up_d = table.derivatives(n);
  s.cross.resize(m);
  s.cross_d.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    s.ground[j] += top_v[j] * top_v[j];
    s.ground_d[j] += 2.0 * top_v[j] * top_d[j];
    s.excited[j] += up_v[j] * up_v[j];
    s.excited_d[j] += 2.0 * up_v[j] * up_d[j];
    s.cross[j] = top_v[j] * up_v[j];
    s.cross_d[j] = top_d[j] * up_v[j] + top_v[j] * up_d[j];
  }
  return s;
}

}  // namespace

void TrapConfig::validate() const {
  if (atom_count < 1) throw std::invalid_argument("atom_count must be >= 1");
  if (!(trap_angular_frequency > 0.0) || !std::isfinite(trap_angular_frequency))
    throw std::invalid_argument("trap angular frequency must be positive");
  if (!(atom_mass > 0.0) || !std::isfinite(atom_mass))
    throw std::invalid_argument("atom mass must be positive");
}

double TrapConfig::oscillator_length() const {
  return std::sqrt(constants::hbar / (atom_mass * trap_angular_frequency));
}

double TrapConfig::dimensionless_radius() const { return std::sqrt(2.0 * atom_count); }

double TrapConfig::radius() const { return dimensionless_radius() * oscillator_length(); }

double TrapConfig::peak_average_density() const {
  return dimensionless_radius() / (std::numbers::pi * oscillator_length());
}

SuperpositionState SuperpositionState::from_population(double ground_population,
                                                       double relative_phase) {
  if (!(ground_population >= 0.0 && ground_population <= 1.0))
    throw std::invalid_argument("ground population must lie in [0, 1]");
  SuperpositionState s;
  s.mag_c0 = std::sqrt(ground_population);
  s.mag_c1 = std::sqrt(1.0 - ground_population);
  s.relative_phase = relative_phase;
  return s;
}

void SuperpositionState::validate() const {
  if (!(mag_c0 >= 0.0 && mag_c0 <= 1.0) || !(mag_c1 >= 0.0 && mag_c1 <= 1.0))
    throw std::invalid_argument("coefficient magnitudes must lie in [0, 1]");
  if (std::fabs(mag_c0 * mag_c0 + mag_c1 * mag_c1 - 1.0) > 1e-12)
    throw std::invalid_argument("|c0|^2 + |c1|^2 must equal 1");
  if (!std::isfinite(relative_phase)) throw std::invalid_argument("relative phase must be finite");
}

std::string_view to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::ground: return "ground";
    case DensityKind::excited: return "excited";
    case DensityKind::cross: return "cross";
    case DensityKind::static_r0: return "static_r0";
    case DensityKind::oscillating_r1: return "oscillating_r1";
    case DensityKind::instantaneous: return "instantaneous";
    case DensityKind::average: return "average";
  }
  return "unknown";
}

double DensityProfile::integral() const { return trapezoid(values, grid.spacing()); }

DimensionlessGrid default_density_grid(int atom_count, double margin, double points_per_unit,
                                       std::size_t min_points) {
  if (atom_count < 1) throw std::invalid_argument("atom_count must be >= 1");
  return DimensionlessGrid::symmetric(std::sqrt(2.0 * atom_count) + margin, points_per_unit,
                                      min_points);
}

DensityProfile ground_density(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  auto s = orbital_sums(cfg, grid);
  return {grid, std::move(s.ground), std::move(s.ground_d), DensityKind::ground};
}

DensityProfile christoffel_darboux_density(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  cfg.validate();
  require_covering_grid(cfg, grid);
  const int n = cfg.atom_count;
  const EigenfunctionTable table(n, grid);
  const auto lo = table.values(n - 1);
  const auto lo_d = table.derivatives(n - 1);
  const auto hi = table.values(n);
  const auto hi_d = table.derivatives(n);
  const double scale = std::sqrt(0.5 * n);
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    values[j] = scale * (lo[j] * hi_d[j] - lo_d[j] * hi[j]);
  // psi_n'' = (x^2 - 2n - 1) psi_n collapses the Wronskian's derivative to
  // -2 psi_{N-1} psi_N.
  std::vector<double> derivs(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) derivs[j] = -2.0 * scale * lo[j] * hi[j];
  return {grid, std::move(values), std::move(derivs), DensityKind::ground};
}

DensityProfile excited_density(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  auto s = orbital_sums(cfg, grid);
  return {grid, std::move(s.excited), std::move(s.excited_d), DensityKind::excited};
}

DensityProfile cross_density(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  auto s = orbital_sums(cfg, grid);
  return {grid, std::move(s.cross), std::move(s.cross_d), DensityKind::cross};
}

ParityParts parity_decomposition(const TrapConfig& cfg, const SuperpositionState& state,
                                 const DimensionlessGrid& grid) {
  state.validate();
  auto s = orbital_sums(cfg, grid);
  const double w0 = state.mag_c0 * state.mag_c0;
  const double w1 = state.mag_c1 * state.mag_c1;
  const double w01 = 2.0 * state.mag_c0 * state.mag_c1;
  const std::size_t m = grid.size();
  std::vector<double> r0(m), r0_d(m), r1(m), r1_d(m);
  for (std::size_t j = 0; j < m; ++j) {
    r0[j] = w0 * s.ground[j] + w1 * s.excited[j];
    r0_d[j] = w0 * s.ground_d[j] + w1 * s.excited_d[j];
    r1[j] = w01 * s.cross[j];
    r1_d[j] = w01 * s.cross_d[j];
  }
  return {{grid, std::move(r0), std::move(r0_d), DensityKind::static_r0},
          {grid, std::move(r1), std::move(r1_d), DensityKind::oscillating_r1}};
}

DensityProfile instantaneous_density(const ParityParts& parts, double phase) {
  const auto& r0 = parts.static_part;
  const auto& r1 = parts.oscillating_part;
  const double c = std::cos(phase);
  const std::size_t m = r0.values.size();
  std::vector<double> values(m), derivs(m);
  for (std::size_t j = 0; j < m; ++j) {
    values[j] = r0.values[j] + r1.values[j] * c;
    derivs[j] = r0.derivatives[j] + r1.derivatives[j] * c;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (values[j] < -1e-12)
      throw NumericalError("negative density " + std::to_string(values[j]) + " at x/ell=" +
                           std::to_string(r0.grid[j]));
  }
  return {r0.grid, std::move(values), std::move(derivs), DensityKind::instantaneous};
}

DensityProfile instantaneous_density(const TrapConfig& cfg, const SuperpositionState& state,
                                     const DimensionlessGrid& grid, double t) {
  const auto parts = parity_decomposition(cfg, state, grid);
  return instantaneous_density(parts, cfg.trap_angular_frequency * t + state.relative_phase);
}

DensityProfile average_density(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  cfg.validate();
  const double radius = cfg.dimensionless_radius();
  const double peak = radius / std::numbers::pi;  // rho0_bar * ell
  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u = grid[j] / radius;
    if (std::fabs(u) <= 1.0) values[j] = peak * std::sqrt(1.0 - u * u);
  }
  return {grid, std::move(values), {}, DensityKind::average};
}

OverlapIntegrals overlap_integrals(const TrapConfig& cfg) {
  cfg.validate();
  return overlap_integrals(cfg, default_density_grid(cfg.atom_count));
}

OverlapIntegrals overlap_integrals(const TrapConfig& cfg, const DimensionlessGrid& grid) {
  const auto cross = cross_density(cfg, grid);
  const double h = grid.spacing();
  OverlapIntegrals out;
  out.atom_count = cfg.atom_count;
  out.r1_dimensionless = trapezoid_product(cross.values, cross.values, h);
  out.r2_dimensionless = trapezoid_product(cross.derivatives, cross.derivatives, h);
  const double ell = cfg.oscillator_length();
  out.r1_integral = out.r1_dimensionless / ell;
  out.r2_integral = out.r2_dimensionless / (ell * ell * ell);
  return out;
}

void write_density_csv(std::ostream& out, const DensityProfile& profile, const TrapConfig& cfg) {
  const double radius = cfg.dimensionless_radius();
  const auto old_precision = out.precision(17);
  out << "x_over_xT,density_times_ell\n";
  for (std::size_t j = 0; j < profile.grid.size(); ++j)
    out << profile.grid[j] / radius << ',' << profile.values[j] << '\n';
  out.precision(old_precision);
}

}  // namespace tonks
