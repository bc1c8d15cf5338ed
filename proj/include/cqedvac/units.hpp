#pragma once

#include <numbers>

// SI constants (exact since the 2019 redefinition) and the single conversion
// layer into the internal unit system: hbar = 1, energies as angular
// frequencies in units of 1e9 rad/s ("angular GHz").
namespace cqedvac::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;               // J s
inline constexpr double hbar = planck / (2.0 * pi);            // J s
inline constexpr double reduced_flux_quantum = hbar / (2.0 * elementary_charge);  // Wb
inline constexpr double von_klitzing = planck / (elementary_charge * elementary_charge);  // ohm
inline constexpr double line_impedance = 50.0;  // ohm

inline constexpr double joule_to_angular_ghz(double energy) { return energy / hbar * 1e-9; }
inline constexpr double angular_ghz_to_joule(double omega) { return omega * 1e9 * hbar; }
/// E/h in GHz to angular GHz.
inline constexpr double ghz_to_angular_ghz(double f) { return 2.0 * pi * f; }
inline constexpr double angular_ghz_to_rad_per_s(double omega) { return omega * 1e9; }

}  // namespace cqedvac::units
