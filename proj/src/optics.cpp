#include "tonks/optics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tonks/constants.hpp"
#include "tonks/errors.hpp"
#include "tonks/parallel.hpp"
#include "tonks/quadrature.hpp"

namespace tonks {

namespace {

using cld = std::complex<long double>;

// Per-step local error budget of the Helmholtz integrator, relative.
constexpr long double kStepTolerance = 1e-10L;
// |n - 1| allowed at the grid edges.
constexpr double kVacuumTolerance = 1e-15;

struct Propagator {
  cld m00, m01, m10, m11;
};

// exp(-Omega) for the traceless Omega = [[a, b], [c, -a]].
Propagator backward_exponential(cld a, cld b, cld c) {
  const cld s = std::sqrt(a * a + b * c);
  cld ch, sh_over_s;
  if (std::abs(s) < 1e-4L) {
    const cld s2 = s * s;
    ch = 1.0L + s2 / 2.0L * (1.0L + s2 / 12.0L * (1.0L + s2 / 30.0L));
    sh_over_s = 1.0L + s2 / 6.0L * (1.0L + s2 / 20.0L * (1.0L + s2 / 42.0L));
  } else {
    ch = std::cosh(s);
    sh_over_s = std::sinh(s) / s;
  }
  return {ch - sh_over_s * a, -sh_over_s * b, -sh_over_s * c, ch + sh_over_s * a};
}

// Fourth-order Magnus step for y' = [[0, 1], [-q(x), 0]] y. With
// Q0 = int q and Q1 = (1/h) int (x - x_mid) q, Omega = [[h Q1, h], [-Q0, -h Q1]].
Propagator magnus_backward(long double h, cld q0, cld q1) {
  return backward_exponential(h * q1, h, -q0);
}

std::pair<cld, cld> propagate(const Propagator& p, std::pair<cld, cld> y) {
  return {p.m00 * y.first + p.m01 * y.second, p.m10 * y.first + p.m11 * y.second};
}

void check_vacuum_edges(const IndexProfile& profile) {
  if (profile.excess.size() < 4) throw std::invalid_argument("index profile too short");
  if (std::abs(profile.excess.front()) > kVacuumTolerance ||
      std::abs(profile.excess.back()) > kVacuumTolerance)
    throw NumericalError("index profile does not reach vacuum at the grid edges");
}

// dn/dx from the excess: fourth-order central differences, second order one
// point in from the ends, one-sided at the ends.
std::vector<std::complex<double>> index_gradient(const IndexProfile& profile) {
  const auto& e = profile.excess;
  const std::size_t m = e.size();
  const double h = profile.spacing;
  std::vector<std::complex<double>> d(m);
  for (std::size_t j = 2; j + 2 < m; ++j)
    d[j] = (-e[j + 2] + 8.0 * e[j + 1] - 8.0 * e[j - 1] + e[j - 2]) / (12.0 * h);
  d[1] = (e[2] - e[0]) / (2.0 * h);
  d[m - 2] = (e[m - 1] - e[m - 3]) / (2.0 * h);
  d[0] = (e[1] - e[0]) / h;
  d[m - 1] = (e[m - 1] - e[m - 2]) / h;
  return d;
}

std::vector<std::string> config_warnings(const OpticalConfig& opt) {
  std::vector<std::string> w;
  if (!opt.off_resonant())
    w.emplace_back("|detuning| < 10 linewidths: off-resonant expansion is questionable");
  return w;
}

}  // namespace

void OpticalConfig::validate() const {
  if (!(vacuum_wavelength > 0.0) || !std::isfinite(vacuum_wavelength))
    throw std::invalid_argument("vacuum wavelength must be positive");
  if (!(linewidth >= 0.0) || !std::isfinite(linewidth))
    throw std::invalid_argument("linewidth must be non-negative");
  if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
  if (linewidth == 0.0 && detuning == 0.0)
    throw std::invalid_argument("detuning and linewidth cannot both vanish");
  if (!(dipole_moment >= 0.0) || !std::isfinite(dipole_moment))
    throw std::invalid_argument("dipole moment must be non-negative");
  if (!(areal_density >= 0.0) || !std::isfinite(areal_density))
    throw std::invalid_argument("areal density must be non-negative");
}

double OpticalConfig::wave_number() const { return constants::two_pi / vacuum_wavelength; }

std::complex<double> OpticalConfig::beta() const {
  const double coupling =
      areal_density * dipole_moment * dipole_moment / (constants::epsilon0 * constants::hbar);
  return coupling / std::complex<double>(detuning, -linewidth);
}

double OpticalConfig::im_beta_squared() const {
  const double coupling =
      areal_density * dipole_moment * dipole_moment / (constants::epsilon0 * constants::hbar);
  const double denom = detuning * detuning + linewidth * linewidth;
  return coupling * coupling * 2.0 * detuning * linewidth / (denom * denom);
}

bool OpticalConfig::off_resonant() const { return std::fabs(detuning) >= 10.0 * linewidth; }

std::string_view to_string(IndexMode mode) {
  return mode == IndexMode::exact_sqrt ? "exact" : "second-order";
}

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::helmholtz: return "helmholtz";
    case Engine::wkb2: return "wkb2";
    case Engine::analytic: return "analytic";
  }
  return "unknown";
}

IndexMode parse_index_mode(std::string_view text) {
  if (text == "exact" || text == "exact_sqrt") return IndexMode::exact_sqrt;
  if (text == "second-order" || text == "second_order") return IndexMode::second_order;
  throw std::invalid_argument("unknown index mode '" + std::string(text) + "'");
}

Engine parse_engine(std::string_view text) {
  if (text == "helmholtz") return Engine::helmholtz;
  if (text == "wkb2") return Engine::wkb2;
  if (text == "analytic") return Engine::analytic;
  throw std::invalid_argument("unknown engine '" + std::string(text) + "'");
}

IndexProfile build_index_profile(const DensityProfile& density, const TrapConfig& trap,
                                 const OpticalConfig& opt, IndexMode mode,
                                 double min_samples_per_wavelength) {
  if (density.kind != DensityKind::instantaneous && density.kind != DensityKind::static_r0)
    throw std::invalid_argument("index profile needs an instantaneous or static density, got " +
                                std::string(to_string(density.kind)));
  trap.validate();
  opt.validate();
  const double ell = trap.oscillator_length();
  const double spacing = density.grid.spacing() * ell;
  if (opt.vacuum_wavelength / spacing < min_samples_per_wavelength)
    throw std::invalid_argument("density grid resolves the wavelength with only " +
                                std::to_string(opt.vacuum_wavelength / spacing) +
                                " samples (need " + std::to_string(min_samples_per_wavelength) +
                                ")");
  const std::complex<double> beta = opt.beta();
  IndexProfile out;
  out.mode = mode;
  out.spacing = spacing;
  const std::size_t m = density.values.size();
  out.positions.resize(m);
  out.values.resize(m);
  out.excess.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.positions[j] = density.grid[j] * ell;
    const std::complex<double> chi = beta * (density.values[j] / ell);
    std::complex<double> excess;
    if (mode == IndexMode::exact_sqrt) {
      // sqrt(1 + chi) - 1 without cancellation
      excess = chi / (1.0 + std::sqrt(1.0 + chi));
    } else {
      excess = 0.5 * chi - 0.125 * chi * chi;
    }
    out.excess[j] = excess;
    out.values[j] = 1.0 + excess;
  }
  return out;
}

FieldSolution solve_helmholtz(const IndexProfile& profile, const OpticalConfig& opt) {
  check_vacuum_edges(profile);
  const std::size_t m = profile.excess.size();
  const long double k = opt.wave_number();
  const long double k2 = k * k;
  const long double h = profile.spacing;

  // q = k^2 n^2 = k^2 (1 + e (2 + e))
  std::vector<cld> q(m);
  for (std::size_t j = 0; j < m; ++j) {
    const cld e(profile.excess[j].real(), profile.excess[j].imag());
    q[j] = k2 * (1.0L + e * (2.0L + e));
  }

  // Q0, Q1 for cell [j, j+1]: cubic through j-1..j+2 inside, linear at the ends.
  auto cell = [&](std::size_t j) {
    if (j == 0 || j + 2 >= m) {
      return magnus_backward(h, h / 2.0L * (q[j] + q[j + 1]), h / 12.0L * (q[j + 1] - q[j]));
    }
    const cld q0 = h / 24.0L * (-q[j - 1] + 13.0L * q[j] + 13.0L * q[j + 1] - q[j + 2]);
    const cld q1 = -h / 720.0L * (q[j + 2] - q[j - 1]) + 7.0L * h / 80.0L * (q[j + 1] - q[j]);
    return magnus_backward(h, q0, q1);
  };
  // Simpson-based step over [j, j+2], used only to estimate the local error.
  auto double_cell = [&](std::size_t j) {
    const long double big = 2.0L * h;
    const cld q0 = big / 6.0L * (q[j] + 4.0L * q[j + 1] + q[j + 2]);
    const cld q1 = big / 12.0L * (q[j + 2] - q[j]);
    return magnus_backward(big, q0, q1);
  };

  const long double x_right = profile.positions.back();
  const cld ik(0.0L, k);
  std::vector<std::pair<cld, cld>> y(m);
  y[m - 1] = {std::exp(ik * x_right), ik * std::exp(ik * x_right)};
  for (std::size_t j = m - 1; j-- > 0;) {
    y[j] = propagate(cell(j), y[j + 1]);
    // two single steps against one double step: the difference is ~30x the
    // local error of a single step
    if (j + 2 < m && ((m - 1 - j) % 2 == 0)) {
      const auto coarse = propagate(double_cell(j), y[j + 2]);
      const long double scale = std::abs(y[j].first) + std::abs(y[j].second) / k;
      const long double diff =
          std::abs(coarse.first - y[j].first) + std::abs(coarse.second - y[j].second) / k;
      if (diff / 30.0L > kStepTolerance * scale) {
        std::ostringstream msg;
        msg << "Helmholtz step at x=" << profile.positions[j] << " m misses the local error "
            << "budget (estimate " << static_cast<double>(diff / 30.0L / scale)
            << "); increase samples per wavelength";
        throw NumericalError(msg.str());
      }
    }
  }

  const long double x_left = profile.positions.front();
  const auto [e_left, de_left] = y[0];
  const cld incident = 0.5L * (e_left + de_left / ik) * std::exp(-ik * x_left);
  const cld reflected = 0.5L * (e_left - de_left / ik) * std::exp(ik * x_left);

  FieldSolution out;
  out.engine = Engine::helmholtz;
  out.positions = profile.positions;
  out.amplitude.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const cld v = y[j].first / incident;
    out.amplitude[j] = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  }
  const cld t = 1.0L / incident;
  const cld r = reflected / incident;
  out.transmission_amp = {static_cast<double>(t.real()), static_cast<double>(t.imag())};
  out.reflection_amp = {static_cast<double>(r.real()), static_cast<double>(r.imag())};
  out.warnings = config_warnings(opt);
  return out;
}

FieldSolution wkb_field(const IndexProfile& profile, const OpticalConfig& opt) {
  check_vacuum_edges(profile);
  const std::size_t m = profile.excess.size();
  const double k = opt.wave_number();
  const double h = profile.spacing;
  const auto dn = index_gradient(profile);
  const double x0 = profile.positions.front();
  const std::complex<double> i(0.0, 1.0);

  FieldSolution out;
  out.engine = Engine::wkb2;
  out.positions = profile.positions;
  out.amplitude.resize(m);
  out.warnings = config_warnings(opt);

  double validity = 0.0;
  std::complex<double> excess_integral = 0.0;  // int (n - 1)
  std::complex<double> correction = 0.0;       // int n'^2 / (8 k n^3)
  std::complex<double> prev_corr_integrand = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::complex<double> n = profile.values[j];
    const std::complex<double> corr_integrand = dn[j] * dn[j] / (8.0 * k * n * n * n);
    if (j > 0) {
      excess_integral += 0.5 * h * (profile.excess[j] + profile.excess[j - 1]);
      correction += 0.5 * h * (corr_integrand + prev_corr_integrand);
    }
    prev_corr_integrand = corr_integrand;
    const std::complex<double> local = dn[j] / (4.0 * k * n * n);
    validity = std::max(validity, std::abs(dn[j] / (k * n * n)));
    const std::complex<double> phase =
        k * (profile.positions[j] - x0) + k * excess_integral - local - correction;
    out.amplitude[j] = std::exp(i * phase) / std::sqrt(n);
  }
  out.transmission_amp = std::exp(i * (k * excess_integral - correction));
  out.reflection_amp = 0.0;
  if (validity > 0.1)
    out.warnings.push_back("WKB validity parameter max|n'/(k n^2)| = " + std::to_string(validity));
  return out;
}

double wkb_transmission(const IndexProfile& profile, const OpticalConfig& opt) {
  check_vacuum_edges(profile);
  const std::size_t m = profile.excess.size();
  const double k = opt.wave_number();
  const double h = profile.spacing;
  const auto dn = index_gradient(profile);
  // long double sums keep T(t) and T(t + pi/omega) equal to well below one
  // ulp of T, which the odd-harmonic floor of the spectrum depends on
  long double int_n = 0.0L, int_corr = 0.0L;
  long double prev_n = 0.0L, prev_corr = 0.0L;
  for (std::size_t j = 0; j < m; ++j) {
    const auto n = profile.values[j];
    const long double im_n = profile.excess[j].imag();
    const long double im_corr = (dn[j] * dn[j] / (n * n * n)).imag();
    if (j > 0) {
      int_n += 0.5L * h * (im_n + prev_n);
      int_corr += 0.5L * h * (im_corr + prev_corr);
    }
    prev_n = im_n;
    prev_corr = im_corr;
  }
  return static_cast<double>(std::exp(-2.0L * k * int_n + int_corr / (4.0L * k)));
}

DimensionlessGrid optical_grid(const TrapConfig& trap, const OpticalConfig& opt,
                               const TimeseriesOptions& options) {
  trap.validate();
  opt.validate();
  const double per_ell =
      options.samples_per_wavelength * trap.oscillator_length() / opt.vacuum_wavelength;
  return default_density_grid(trap.atom_count, options.extent_margin,
                              std::max(options.points_per_unit, per_ell));
}

double AnalyticTransmission::at_phase(double phase) const {
  return t_n * std::exp(zeta * std::cos(2.0 * phase));
}

AnalyticTransmission analytic_transmission_params(const TrapConfig& trap,
                                                  const SuperpositionState& state,
                                                  const OpticalConfig& opt) {
  trap.validate();
  state.validate();
  opt.validate();
  const auto grid = default_density_grid(trap.atom_count);
  const auto parts = parity_decomposition(trap, state, grid);
  const auto& r0 = parts.static_part;
  const auto& r1 = parts.oscillating_part;
  const double h = grid.spacing();
  const double square = trapezoid_product(r0.values, r0.values, h) +
                        0.5 * trapezoid_product(r1.values, r1.values, h);
  const double gradient = trapezoid_product(r0.derivatives, r0.derivatives, h) +
                          0.5 * trapezoid_product(r1.derivatives, r1.derivatives, h);

  const double ell = trap.oscillator_length();
  const double k = opt.wave_number();
  const double im_b = opt.beta().imag();
  const double im_b2 = opt.im_beta_squared();

  AnalyticTransmission out;
  out.overlaps = overlap_integrals(trap);
  out.log_t_n = -trap.atom_count * k * im_b + 0.25 * k * im_b2 * square / ell +
                im_b2 / (16.0 * k) * gradient / (ell * ell * ell);
  out.t_n = std::exp(out.log_t_n);
  const double mix = 2.0 * state.mag_c0 * state.mag_c1;
  out.zeta = mix * mix * im_b2 *
             (k * out.overlaps.r1_integral / 8.0 + out.overlaps.r2_integral / (32.0 * k));
  return out;
}

TransmissionRecord transmission_timeseries(const TrapConfig& trap, const SuperpositionState& state,
                                           const OpticalConfig& opt,
                                           const TimeseriesOptions& options) {
  trap.validate();
  state.validate();
  opt.validate();
  if (options.samples_per_period < 16)
    throw std::invalid_argument("need at least 16 samples per trap period");
  if (options.periods < 1) throw std::invalid_argument("need at least one trap period");

  const double omega = trap.trap_angular_frequency;
  const std::size_t count =
      static_cast<std::size_t>(options.samples_per_period) * static_cast<std::size_t>(options.periods);
  const double dt = constants::two_pi / omega / options.samples_per_period;

  TransmissionRecord rec;
  rec.trap_angular_frequency = omega;
  rec.engine = options.engine;
  rec.times.resize(count);
  rec.values.resize(count);
  for (std::size_t j = 0; j < count; ++j) rec.times[j] = static_cast<double>(j) * dt;

  if (options.engine == Engine::analytic) {
    const auto params = analytic_transmission_params(trap, state, opt);
    for (std::size_t j = 0; j < count; ++j)
      rec.values[j] = params.at_phase(omega * rec.times[j] + state.relative_phase);
    return rec;
  }

  const auto grid = optical_grid(trap, opt, options);
  const auto parts = parity_decomposition(trap, state, grid);
  parallel_for(count, options.workers, [&](std::size_t j) {
    try {
      const auto density =
          instantaneous_density(parts, omega * rec.times[j] + state.relative_phase);
      const auto profile = build_index_profile(density, trap, opt, options.index_mode);
      rec.values[j] = options.engine == Engine::helmholtz
                          ? solve_helmholtz(profile, opt).transmission()
                          : wkb_transmission(profile, opt);
    } catch (const NumericalError& e) {
      throw NumericalError("time sample " + std::to_string(j) + ": " + e.what());
    }
  });
  return rec;
}

void write_field_csv(std::ostream& out, const FieldSolution& field, const DensityProfile& density,
                     const TrapConfig& trap) {
  if (field.amplitude.size() != density.values.size())
    throw std::invalid_argument("field and density grids differ");
  const double radius = trap.radius();
  const auto old_precision = out.precision(17);
  out << "x_over_xT,abs_E,re_E,im_E,density_times_ell\n";
  for (std::size_t j = 0; j < field.amplitude.size(); ++j) {
    const auto e = field.amplitude[j];
    out << field.positions[j] / radius << ',' << std::abs(e) << ',' << e.real() << ',' << e.imag()
        << ',' << density.values[j] << '\n';
  }
  out.precision(old_precision);
}

void write_transmission_csv(std::ostream& out, const TransmissionRecord& record) {
  const auto old_precision = out.precision(17);
  out << "t_seconds,transmission\n";
  for (std::size_t j = 0; j < record.times.size(); ++j)
    out << record.times[j] << ',' << record.values[j] << '\n';
  out.precision(old_precision);
}

TransmissionRecord read_transmission_csv(std::istream& in, double trap_angular_frequency) {
  if (!(trap_angular_frequency > 0.0))
    throw std::invalid_argument("trap angular frequency must be positive");
  TransmissionRecord rec;
  rec.trap_angular_frequency = trap_angular_frequency;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.find_first_of("0123456789") != 0 && line[0] != '-' && line[0] != '.')
      continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw InversionError("signal line " + std::to_string(line_no) + ": expected 't,T'");
    try {
      const double t = std::stod(line.substr(0, comma));
      const double v = std::stod(line.substr(comma + 1));
      rec.times.push_back(t);
      rec.values.push_back(v);
    } catch (const std::logic_error&) {
      throw InversionError("signal line " + std::to_string(line_no) + ": not numeric");
    }
  }
  if (rec.times.size() < 16) throw InversionError("signal has fewer than 16 samples");
  return rec;
}

}  // namespace tonks
