#include "cqedvac/circuit.hpp"

#include <cmath>
#include <string>

#include "cqedvac/error.hpp"

namespace cqedvac::circuit {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string("circuit: ") + name + " must be finite and > 0, got " +
                      std::to_string(value));
  }
}

void require_mode(int k, const RawCircuit& raw) {
  if (k < 1 || k > raw.N) {
    throw DomainError("circuit: mode index " + std::to_string(k) + " outside [1, " +
                      std::to_string(raw.N) + "]");
  }
}

}  // namespace

double RawCircuit::line_impedance() const { return std::sqrt(l_r / c_r); }

void validate(const RawCircuit& raw) {
  require_positive(raw.L1, "L1");
  require_positive(raw.L2, "L2");
  require_positive(raw.l_r, "l_r");
  require_positive(raw.c_r, "c_r");
  require_positive(raw.a, "a");
  require_positive(raw.E_J, "E_J");
  require_positive(raw.E_CJ, "E_CJ");
  if (raw.N < 1) throw DomainError("circuit: N must be >= 1");
}

DerivedConstants derive_constants(const RawCircuit& raw) {
  validate(raw);
  const double L1 = raw.L1;
  const double L2 = raw.L2;
  const double Lr = raw.cell_inductance();
  const double denom = L1 * Lr + L1 * L2 + L2 * Lr;
  const double phi0sq = units::reduced_flux_quantum * units::reduced_flux_quantum;
  const double e = units::elementary_charge;

  DerivedConstants c;
  c.E_Lr = units::joule_to_angular_ghz(phi0sq * (L1 + L2) / denom);
  c.E_LJ = units::joule_to_angular_ghz(phi0sq * (L1 + Lr) / denom);
  c.G = units::joule_to_angular_ghz(phi0sq * L1 / denom);
  c.E_Cr = units::joule_to_angular_ghz(e * e / (2.0 * raw.cell_capacitance()));
  c.l_r_renorm = raw.l_r * (L1 + L2 + L2 * L1 / Lr) / (L1 + L2);
  c.chi = std::pow(Lr / denom, 0.25) * L1 / std::pow(L1 + L2, 0.75);
  return c;
}

double mode_frequency(int k, const DerivedConstants& c, const RawCircuit& raw) {
  require_mode(k, raw);
  const double d = raw.resonator_length();
  return k * units::pi * raw.a / d * std::sqrt(8.0 * c.E_Cr * c.E_Lr);
}

double vacuum_rabi(int k, const DerivedConstants& c, const RawCircuit& raw, double phi01) {
  require_mode(k, raw);
  if (phi01 < 0.0) throw DomainError("circuit: phi01 must be >= 0");
  const double hbar = units::hbar;
  const double e = units::elementary_charge;
  const double d = raw.resonator_length();
  const double G_joule = units::angular_ghz_to_joule(c.G);
  const double omega_k = units::angular_ghz_to_rad_per_s(mode_frequency(k, c, raw));

  double rabi_energy = 0.0;
  if (k < raw.N) {
    rabi_energy = G_joule * (4.0 * e / hbar) * phi01 * std::sin(k * units::pi * raw.a / (2.0 * d)) /
                  omega_k * std::sqrt(hbar * omega_k * raw.N / (2.0 * d * raw.c_r));
  } else {
    rabi_energy = G_joule * (4.0 * e / hbar) * phi01 / omega_k *
                  std::sqrt(hbar * omega_k * raw.N / (d * raw.c_r));
  }
  return units::joule_to_angular_ghz(rabi_energy);
}

double mu_factor(const RawCircuit& raw) {
  validate(raw);
  const double x = units::pi * raw.a / (2.0 * raw.resonator_length());
  return std::sin(x) / x;
}

double coupling_estimate(double chi, int N, double mu, double nu, double z_r) {
  if (chi < 0.0 || chi > 1.0) throw DomainError("coupling_estimate: chi outside [0, 1]");
  if (N < 1) throw DomainError("coupling_estimate: N must be >= 1");
  if (!(z_r > 0.0)) throw DomainError("coupling_estimate: Z_r must be > 0");
  return std::sqrt(units::von_klitzing / z_r) * mu * nu * chi * std::sqrt(static_cast<double>(N));
}

}  // namespace cqedvac::circuit
