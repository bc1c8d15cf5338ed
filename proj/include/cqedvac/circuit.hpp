#pragma once

// Lumped-element chain of inductively coupled fluxonium cells: effective
// energy constants, resonator mode frequencies and collective vacuum Rabi
// frequencies. Inputs are SI (except the junction energies, given as E/h in
// GHz); every energy output is an angular frequency in units of 1e9 rad/s.

#include "cqedvac/units.hpp"

namespace cqedvac::circuit {

struct RawCircuit {
  double L1 = 0.0;    // H, shunt to ground inside each cell
  double L2 = 0.0;    // H, between the shunt node and the junction
  double l_r = 0.0;   // H/m
  double c_r = 0.0;   // F/m
  double a = 0.0;     // m, cell length
  int N = 1;          // atom count
  double E_J = 0.0;   // GHz (E/h)
  double E_CJ = 0.0;  // GHz (E/h)

  double resonator_length() const { return N * a; }
  double cell_inductance() const { return a * l_r; }
  double cell_capacitance() const { return a * c_r; }
  /// Characteristic impedance sqrt(l_r / c_r) in ohm.
  double line_impedance() const;
};

struct DerivedConstants {
  double E_Lr = 0.0;        // resonator inductive energy
  double E_LJ = 0.0;        // fluxonium inductive energy
  double G = 0.0;           // coupling magnitude
  double E_Cr = 0.0;        // resonator charging energy e^2 / (2 C_r)
  double l_r_renorm = 0.0;  // H/m
  double chi = 0.0;         // branching ratio in (0, 1]
};

/// Throws DomainError unless every physical input is strictly positive.
void validate(const RawCircuit& raw);

DerivedConstants derive_constants(const RawCircuit& raw);

/// omega_k = (k pi a / d) sqrt(8 E_Cr E_Lr), 1 <= k <= N.
double mode_frequency(int k, const DerivedConstants& c, const RawCircuit& raw);

/// Collective vacuum Rabi frequency Omega_k. The k = N mode couples to the
/// staggered collective excitation and carries its own normalization.
double vacuum_rabi(int k, const DerivedConstants& c, const RawCircuit& raw, double phi01);

/// sin(pi a / 2d) / (pi a / 2d), never approximated by 1.
double mu_factor(const RawCircuit& raw);

inline double nu_factor(double phi01) { return phi01 / (4.0 * units::pi); }

/// Omega_1 / omega_1 = sqrt(R_K / Z_r) mu nu chi sqrt(N).
double coupling_estimate(double chi, int N, double mu, double nu,
                         double z_r = units::line_impedance);

}  // namespace cqedvac::circuit
