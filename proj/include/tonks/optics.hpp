#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tonks/density.hpp"

namespace tonks {

/// Far-detuned probe and the atomic transition it couples to.
struct OpticalConfig {
  double vacuum_wavelength = 0.0;  // m
  double detuning = 0.0;           // rad/s, omega_0 - omega_L
  double linewidth = 0.0;          // rad/s
  double dipole_moment = 0.0;      // C m
  double areal_density = 0.0;      // atoms per m^2 of pencil cross-section

  void validate() const;
  double wave_number() const;
  /// beta = N_a d^2 / (eps0 hbar (Delta - i gamma)), metres.
  std::complex<double> beta() const;
  /// Im(beta^2) from its closed form, which keeps the sign of Delta exactly.
  double im_beta_squared() const;
  /// True when |Delta| >= 10 gamma.
  bool off_resonant() const;
};

enum class IndexMode { exact_sqrt, second_order };
enum class Engine { helmholtz, wkb2, analytic };

std::string_view to_string(IndexMode mode);
std::string_view to_string(Engine engine);
IndexMode parse_index_mode(std::string_view text);
Engine parse_engine(std::string_view text);

/// Complex refractive index on a uniform physical grid.
///
/// `excess` holds n - 1 computed directly from beta * rho, so it keeps full
/// relative precision even though n itself is 1 + O(1e-4).
struct IndexProfile {
  std::vector<double> positions;  // m
  double spacing = 0.0;           // m
  std::vector<std::complex<double>> values;
  std::vector<std::complex<double>> excess;
  IndexMode mode = IndexMode::exact_sqrt;
};

struct FieldSolution {
  std::vector<double> positions;  // m
  std::vector<std::complex<double>> amplitude;  // unit incident amplitude
  std::complex<double> transmission_amp;
  std::complex<double> reflection_amp;
  Engine engine = Engine::helmholtz;
  std::vector<std::string> warnings;

  double transmission() const { return std::norm(transmission_amp); }
  double reflection() const { return std::norm(reflection_amp); }
};

struct TransmissionRecord {
  std::vector<double> times;   // s
  std::vector<double> values;  // T(t)
  double trap_angular_frequency = 0.0;
  Engine engine = Engine::helmholtz;
};

/// Sampling and solver settings for the forward model.
struct TimeseriesOptions {
  int samples_per_period = 256;
  int periods = 1;
  Engine engine = Engine::helmholtz;
  IndexMode index_mode = IndexMode::exact_sqrt;
  double samples_per_wavelength = 64.0;
  double extent_margin = 6.0;
  double points_per_unit = 16.0;
  unsigned workers = 1;
};

/// T(t) = T_N exp(zeta cos(2(omega t + alpha))) in closed form.
struct AnalyticTransmission {
  double log_t_n = 0.0;
  double t_n = 0.0;
  double zeta = 0.0;
  OverlapIntegrals overlaps;

  double at_phase(double phase) const;  // phase = omega t + alpha
};

IndexProfile build_index_profile(const DensityProfile& density, const TrapConfig& trap,
                                 const OpticalConfig& opt, IndexMode mode,
                                 double min_samples_per_wavelength = 40.0);

/// Scattering solution of E'' + n^2 k^2 E = 0 with a pure outgoing wave on
/// the right.
FieldSolution solve_helmholtz(const IndexProfile& profile, const OpticalConfig& opt);

/// Second-order WKB forward field launched from the left grid edge.
FieldSolution wkb_field(const IndexProfile& profile, const OpticalConfig& opt);

/// exp(-2k int Im n + (1/4k) int Im(n'^2/n^3)), the modulus of the WKB field.
double wkb_transmission(const IndexProfile& profile, const OpticalConfig& opt);

/// Grid fine enough for the optical solvers.
DimensionlessGrid optical_grid(const TrapConfig& trap, const OpticalConfig& opt,
                               const TimeseriesOptions& options);

TransmissionRecord transmission_timeseries(const TrapConfig& trap, const SuperpositionState& state,
                                           const OpticalConfig& opt,
                                           const TimeseriesOptions& options);

AnalyticTransmission analytic_transmission_params(const TrapConfig& trap,
                                                  const SuperpositionState& state,
                                                  const OpticalConfig& opt);

/// Header `x_over_xT,abs_E,re_E,im_E,density_times_ell`; the density must be
/// the profile the field was computed from.
void write_field_csv(std::ostream& out, const FieldSolution& field, const DensityProfile& density,
                     const TrapConfig& trap);

/// Header `t_seconds,transmission`.
void write_transmission_csv(std::ostream& out, const TransmissionRecord& record);
TransmissionRecord read_transmission_csv(std::istream& in, double trap_angular_frequency);

}  // namespace tonks
