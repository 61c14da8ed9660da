#include "tonks/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "tonks/constants.hpp"
#include "tonks/errors.hpp"
#include "tonks/parallel.hpp"

namespace tonks {

int record_periods(const TransmissionRecord& record) {
  const std::size_t m = record.times.size();
  if (m < 2 || record.values.size() != m)
    throw InversionError("transmission record is empty or malformed");
  if (!(record.trap_angular_frequency > 0.0))
    throw InversionError("transmission record lacks the trap frequency");
  const double dt = record.times[1] - record.times[0];
  if (!(dt > 0.0)) throw InversionError("transmission samples must increase in time");
  for (std::size_t j = 1; j < m; ++j) {
    const double expected = record.times[0] + static_cast<double>(j) * dt;
    if (std::fabs(record.times[j] - expected) > 1e-9 * dt * static_cast<double>(m))
      throw InversionError("transmission samples are not uniform in time");
  }
  const double span = dt * static_cast<double>(m);
  const double periods = span * record.trap_angular_frequency / constants::two_pi;
  const double rounded = std::round(periods);
  if (rounded < 1.0 || std::fabs(periods - rounded) > 1e-6 * rounded)
    throw InversionError("record spans " + std::to_string(periods) +
                         " trap periods; an integer number is required");
  return static_cast<int>(rounded);
}

std::complex<double> fourier_coefficient(const TransmissionRecord& record, int multiple) {
  const std::size_t m = record.times.size();
  const int periods = record_periods(record);
  const double origin_phase = record.trap_angular_frequency * record.times[0];
  // the modulation is ~1e-10 of the DC level, so sum deviations from the mean
  double mean = 0.0;
  for (double v : record.values) mean += v;
  mean /= static_cast<double>(m);
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    // exact grid phases: omega t_j = 2 pi periods j / M plus the start offset
    const double phase = constants::two_pi * static_cast<double>(periods) * static_cast<double>(j) /
                             static_cast<double>(m) +
                         origin_phase;
    sum += (record.values[j] - mean) * std::polar(1.0, static_cast<double>(multiple) * phase);
  }
  sum /= static_cast<double>(m);
  if (multiple == 0) sum += mean;
  return sum;
}

TransmissionSpectrum dft_harmonics(const TransmissionRecord& record, int s_max) {
  if (s_max < 2) throw std::invalid_argument("need harmonics up to at least 4 omega");
  const int periods = record_periods(record);
  const auto m = static_cast<long>(record.times.size());
  // bin of 2 s omega is 2 s periods; it must stay below Nyquist
  if (2L * s_max * periods >= m / 2)
    throw std::invalid_argument("harmonic 2*s_max*omega is above the Nyquist frequency");
  TransmissionSpectrum out;
  out.trap_angular_frequency = record.trap_angular_frequency;
  out.harmonics.reserve(static_cast<std::size_t>(s_max) + 1);
  for (int s = 0; s <= s_max; ++s) out.harmonics.push_back(fourier_coefficient(record, 2 * s));
  return out;
}

double bessel_i(int order, double z) {
  if (order < 0) throw std::invalid_argument("Bessel order must be >= 0");
  if (!(std::fabs(z) <= 10.0)) throw std::invalid_argument("|z| > 10 is outside the validated range");
  const double half = 0.5 * std::fabs(z);
  // leading term (z/2)^s / s!
  double term = 1.0;
  for (int j = 1; j <= order; ++j) term *= half / j;
  if (term == 0.0) return 0.0;
  const double q = half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return (z < 0.0 && (order & 1)) ? -sum : sum;
}

double extract_alpha(const TransmissionSpectrum& spectrum, int detuning_sign, double noise_floor) {
  if (spectrum.harmonics.size() < 2) throw std::invalid_argument("spectrum lacks the 2 omega term");
  if (detuning_sign != 1 && detuning_sign != -1)
    throw std::invalid_argument("detuning sign must be +1 or -1");
  const auto dc = spectrum.harmonics[0];
  const auto first = spectrum.harmonics[1];
  if (!(std::abs(first) > noise_floor * std::abs(dc)))
    throw InversionError("modulation too weak: |T(2w)|/T(0) = " +
                         std::to_string(std::abs(first) / std::abs(dc)));
  double arg = std::arg(first);
  // I1(zeta) < 0 for negative detuning adds pi to the phase
  if (detuning_sign < 0) arg -= std::numbers::pi;
  double alpha = -0.5 * arg;
  while (alpha <= -0.5 * std::numbers::pi) alpha += std::numbers::pi;
  while (alpha > 0.5 * std::numbers::pi) alpha -= std::numbers::pi;
  return alpha;
}

double extract_zeta(const TransmissionSpectrum& spectrum, double alpha, double tolerance) {
  if (spectrum.harmonics.size() < 3) throw std::invalid_argument("spectrum lacks the 4 omega term");
  const auto dc = spectrum.harmonics[0];
  const auto first = spectrum.harmonics[1];
  const auto second = spectrum.harmonics[2];
  const double denom = dc.real() - std::abs(second);
  if (!(denom > 0.0)) throw InversionError("spectrum has no positive DC term");
  const std::complex<double> z = 2.0 * first * std::polar(1.0, 2.0 * alpha) / denom;
  // below the DFT noise floor there is no phase to check
  const bool measurable = std::abs(z) > 1e-13;
  if (measurable && std::fabs(z.imag()) > tolerance * std::abs(z))
    throw InversionError("spectrum is inconsistent with a log-cosine modulation (imaginary residue " +
                         std::to_string(std::fabs(z.imag()) / std::abs(z)) + ")");
  return z.real();
}

double zeta_per_unit_mixing(const TrapConfig& trap, const OpticalConfig& opt) {
  const auto r = overlap_integrals(trap);
  const double k = opt.wave_number();
  return opt.im_beta_squared() * (k * r.r1_integral / 8.0 + r.r2_integral / (32.0 * k));
}

InferenceResult infer_coefficients(double zeta, double alpha, const TrapConfig& trap,
                                   const OpticalConfig& opt, double clamp_tolerance) {
  trap.validate();
  opt.validate();
  if (opt.im_beta_squared() == 0.0) throw InversionError("Im(beta^2) vanishes; zeta carries no information");
  const double unit = zeta_per_unit_mixing(trap, opt);
  const double radicand = zeta / unit;
  if (radicand < 0.0)
    throw InversionError("sign of zeta contradicts the sign of the detuning");
  InferenceResult out;
  out.zeta_estimate = zeta;
  out.alpha_estimate = alpha;
  double product = 0.5 * std::sqrt(radicand);
  if (product > 0.5) {
    if (product > 0.5 * (1.0 + clamp_tolerance))
      throw InversionError("|c0||c1| = " + std::to_string(product) + " exceeds 1/2; out of model");
    out.product_clamped = true;
    out.notes.push_back("raw |c0||c1| = " + std::to_string(product) + " clamped to 1/2");
    product = 0.5;
  }
  out.coefficient_product = product;
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * product * product));
  out.populations = std::pair{0.5 * (1.0 + root), 0.5 * (1.0 - root)};
  if (product == 0.0) out.notes.push_back("pure state: no ground/excited mixing");
  out.notes.push_back("assignment of the two populations to c0 and c1 is not determined");
  out.notes.push_back("alpha is determined modulo pi");
  return out;
}

InferenceResult infer_atom_number(double zeta, double coefficient_product,
                                  const TrapConfig& trap_template, const OpticalConfig& opt,
                                  int max_atoms, unsigned workers) {
  if (max_atoms < 1) throw std::invalid_argument("search range must include N = 1");
  if (!(coefficient_product > 0.0 && coefficient_product <= 0.5))
    throw std::invalid_argument("|c0||c1| must lie in (0, 1/2]");
  opt.validate();
  const double mix = 4.0 * coefficient_product * coefficient_product;
  std::vector<double> model(static_cast<std::size_t>(max_atoms));
  parallel_for(model.size(), workers, [&](std::size_t i) {
    TrapConfig trap = trap_template;
    trap.atom_count = static_cast<int>(i) + 1;
    model[i] = mix * zeta_per_unit_mixing(trap, opt);
  });
  const auto [lo, hi] = std::minmax_element(model.begin(), model.end());
  const double slack = 1e-12 * std::max(std::fabs(*lo), std::fabs(*hi));
  if (zeta < *lo - slack || zeta > *hi + slack)
    throw InversionError("zeta = " + std::to_string(zeta) + " lies outside the model range [" +
                         std::to_string(*lo) + ", " + std::to_string(*hi) + "] for N <= " +
                         std::to_string(max_atoms));

  AtomCountEstimate est;
  est.best_residual = std::numeric_limits<double>::infinity();
  est.runner_up_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double residual = std::fabs(model[i] - zeta);
    const int n = static_cast<int>(i) + 1;
    // strict comparisons: the smaller N wins ties
    if (residual < est.best_residual) {
      est.runner_up = est.best;
      est.runner_up_residual = est.best_residual;
      est.best = n;
      est.best_residual = residual;
    } else if (residual < est.runner_up_residual) {
      est.runner_up = n;
      est.runner_up_residual = residual;
    }
  }
  InferenceResult out;
  out.zeta_estimate = zeta;
  out.coefficient_product = coefficient_product;
  out.atoms = est;
  return out;
}

void write_spectrum_csv(std::ostream& out, const TransmissionSpectrum& spectrum) {
  const auto old_precision = out.precision(17);
  out << "harmonic_index,abs_coeff,arg_coeff\n";
  for (std::size_t s = 0; s < spectrum.harmonics.size(); ++s)
    out << s << ',' << std::abs(spectrum.harmonics[s]) << ',' << std::arg(spectrum.harmonics[s])
        << '\n';
  out.precision(old_precision);
}

}  // namespace tonks
