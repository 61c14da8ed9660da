#pragma once

#include <numbers>

namespace tonks::constants {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double epsilon0 = 8.8541878128e-12;     // F / m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

inline constexpr double rb87_mass = 86.909180527 * atomic_mass_unit;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace tonks::constants
