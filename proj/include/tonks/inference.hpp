#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tonks/optics.hpp"

namespace tonks {

/// Complex Fourier coefficients at the even harmonics 2 s omega, s = 0..s_max.
struct TransmissionSpectrum {
  std::vector<std::complex<double>> harmonics;
  double trap_angular_frequency = 0.0;

  int max_harmonic() const { return static_cast<int>(harmonics.size()) - 1; }
};

struct AtomCountEstimate {
  int best = 0;
  double best_residual = 0.0;
  int runner_up = 0;
  double runner_up_residual = 0.0;
};

struct InferenceResult {
  double zeta_estimate = 0.0;
  double alpha_estimate = 0.0;
  /// |c0||c1|; set when coefficients were inferred.
  std::optional<double> coefficient_product;
  /// The two admissible values of |c0|^2 (larger first); which one belongs
  /// to the ground state is not determined by the signal.
  std::optional<std::pair<double, double>> populations;
  /// The raw product exceeded 1/2 by less than the tolerance and was clamped.
  bool product_clamped = false;
  std::optional<AtomCountEstimate> atoms;
  std::vector<std::string> notes;
};

/// Number of whole trap periods spanned by the record; throws InversionError
/// when the samples are not uniform or do not cover an integer number.
int record_periods(const TransmissionRecord& record);

/// (1/M) sum_j T(t_j) exp(+i m omega t_j) for the harmonic m omega.
std::complex<double> fourier_coefficient(const TransmissionRecord& record, int multiple);

TransmissionSpectrum dft_harmonics(const TransmissionRecord& record, int s_max);

/// Modified Bessel function of the first kind, ascending series, |z| <= 10.
double bessel_i(int order, double z);

/// alpha from the phase of T(2 omega), reduced to (-pi/2, pi/2].
double extract_alpha(const TransmissionSpectrum& spectrum, int detuning_sign,
                     double noise_floor = 1e-13);

/// zeta = 2 T(2w) e^{2 i alpha} / (T(0) - |T(4w)|); the imaginary residue
/// must stay below tolerance relative to |zeta|.
double extract_zeta(const TransmissionSpectrum& spectrum, double alpha, double tolerance = 1e-8);

/// Modulation strength per unit (2|c0||c1|)^2 for a given trap and probe.
double zeta_per_unit_mixing(const TrapConfig& trap, const OpticalConfig& opt);

InferenceResult infer_coefficients(double zeta, double alpha, const TrapConfig& trap,
                                   const OpticalConfig& opt, double clamp_tolerance = 1e-3);

/// Exhaustive search over N = 1..max_atoms for the zeta(N) closest to zeta.
InferenceResult infer_atom_number(double zeta, double coefficient_product,
                                  const TrapConfig& trap_template, const OpticalConfig& opt,
                                  int max_atoms, unsigned workers = 1);

/// Header `harmonic_index,abs_coeff,arg_coeff`; harmonic_index s labels 2 s omega.
void write_spectrum_csv(std::ostream& out, const TransmissionSpectrum& spectrum);

}  // namespace tonks
