#pragma once

// Reference implementations that share no code with the library. They are
// slow and only used to check it.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "tonks/constants.hpp"
#include "tonks/density.hpp"
#include "tonks/optics.hpp"

namespace oracle {

using cld = std::complex<long double>;

/// Physicists' Hermite function H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)),
/// long double, unnormalized recurrence with the norm applied at the end.
inline long double hermite_function(int n, long double x) {
  long double h_prev = 1.0L;
  long double h = 2.0L * x;
  if (n == 0) h = 1.0L;
  for (int m = 1; m < n; ++m) {
    const long double next = 2.0L * x * h - 2.0L * m * h_prev;
    h_prev = h;
    h = next;
  }
  const long double log_norm =
      0.5L * (n * std::log(2.0L) + std::lgamma(n + 1.0L) + 0.5L * std::log(std::numbers::pi_v<long double>));
  const long double sign = h < 0 ? -1.0L : 1.0L;
  if (h == 0.0L) return 0.0L;
  return sign * std::exp(std::log(std::fabs(h)) - 0.5L * x * x - log_norm);
}

/// r0 + r1 cos(phase) at one point for the two-state superposition, in
/// units of 1/ell, by explicit orbital sums.
inline long double density_at(int atoms, double p0, double phase, long double x) {
  std::vector<long double> psi(atoms + 1);
  for (int n = 0; n <= atoms; ++n) psi[n] = hermite_function(n, x);
  long double below = 0.0L;
  for (int n = 0; n + 1 < atoms; ++n) below += psi[n] * psi[n];
  const long double rho0 = below + psi[atoms - 1] * psi[atoms - 1];
  const long double rho1 = below + psi[atoms] * psi[atoms];
  const long double c0 = std::sqrt(static_cast<long double>(p0));
  const long double c1 = std::sqrt(1.0L - p0);
  return c0 * c0 * rho0 + c1 * c1 * rho1 + 2.0L * c0 * c1 * psi[atoms - 1] * psi[atoms] * std::cos(phase);
}

/// Classical RK4 for E'' = -q(x) E, integrated from the right edge b (pure
/// outgoing wave) to the left edge a; returns (t, r).
template <class Q>
std::pair<cld, cld> rk4_scattering(Q q, long double k, long double a, long double b, long steps) {
  const long double h = (b - a) / steps;
  const cld ik(0.0L, k);
  long double x = b;
  cld e = std::exp(ik * x);
  cld d = ik * e;
  for (long i = 0; i < steps; ++i) {
    const cld q1 = q(x), q2 = q(x - 0.5L * h), q4 = q(x - h);
    const cld ke1 = d, kd1 = -q1 * e;
    const cld ke2 = d - 0.5L * h * kd1, kd2 = -q2 * (e - 0.5L * h * ke1);
    const cld ke3 = d - 0.5L * h * kd2, kd3 = -q2 * (e - 0.5L * h * ke2);
    const cld ke4 = d - h * kd3, kd4 = -q4 * (e - h * ke3);
    e -= h / 6.0L * (ke1 + 2.0L * ke2 + 2.0L * ke3 + ke4);
    d -= h / 6.0L * (kd1 + 2.0L * kd2 + 2.0L * kd3 + kd4);
    x -= h;
  }
  const cld incident = 0.5L * (e + d / ik) * std::exp(-ik * x);
  const cld reflected = 0.5L * (e - d / ik) * std::exp(ik * x);
  return {1.0L / incident, reflected / incident};
}

/// Airy formula for a homogeneous slab of index n and thickness d in vacuum.
inline std::pair<std::complex<double>, std::complex<double>> slab(std::complex<double> n, double k,
                                                                  double d) {
  const std::complex<double> r12 = (1.0 - n) / (1.0 + n);
  const std::complex<double> t12 = 2.0 / (1.0 + n);
  const std::complex<double> t21 = 2.0 * n / (1.0 + n);
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, 1.0) * n * k * d);
  const std::complex<double> denom = 1.0 - r12 * r12 * phase * phase;
  return {t12 * t21 * phase / denom, r12 * (1.0 - phase * phase) / denom};
}

/// Characteristic-matrix method for a stack of homogeneous layers between
/// vacuum half-spaces; returns (t, r) up to phase conventions.
inline std::pair<cld, cld> layered(const std::vector<cld>& index, long double thickness, long double k) {
  cld m11 = 1.0L, m12 = 0.0L, m21 = 0.0L, m22 = 1.0L;
  const cld i(0.0L, 1.0L);
  for (const cld& n : index) {
    const cld delta = n * k * thickness;
    const cld c = std::cos(delta), s = std::sin(delta);
    const cld a11 = c, a12 = -i * s / n, a21 = -i * n * s, a22 = c;
    const cld b11 = m11 * a11 + m12 * a21, b12 = m11 * a12 + m12 * a22;
    const cld b21 = m21 * a11 + m22 * a21, b22 = m21 * a12 + m22 * a22;
    m11 = b11, m12 = b12, m21 = b21, m22 = b22;
  }
  const cld denom = m11 + m12 + m21 + m22;
  return {2.0L / denom, (m11 + m12 - m21 - m22) / denom};
}

/// Index profile on explicit positions from a function returning n - 1.
template <class Excess>
tonks::IndexProfile make_profile(double left, double right, std::size_t points, Excess excess) {
  tonks::IndexProfile p;
  p.spacing = (right - left) / static_cast<double>(points - 1);
  p.mode = tonks::IndexMode::exact_sqrt;
  for (std::size_t j = 0; j < points; ++j) {
    const double x = left + p.spacing * static_cast<double>(j);
    const std::complex<double> dn = excess(x);
    p.positions.push_back(x);
    p.excess.push_back(dn);
    p.values.push_back(1.0 + dn);
  }
  return p;
}

/// The worked 87Rb example with the given areal density.
inline tonks::TrapConfig rb_trap(int atoms = 30) {
  return {atoms, tonks::constants::two_pi * 100.0, tonks::constants::rb87_mass};
}

inline tonks::OpticalConfig rb_optics(double detuning_hz = 90e6, double areal_density = 6.25e12) {
  return {794.978e-9, tonks::constants::two_pi * detuning_hz, 1.80647e7, 1.4651e-29, areal_density};
}

}  // namespace oracle
