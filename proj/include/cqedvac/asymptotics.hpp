#pragma once

// Ultrastrong-coupling limit of the chain: coherent-state vacua, the
// pseudospin configuration minimizer, closed-form splitting estimates and
// the exponent beta(N) of exp(-beta g^2).

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "cqedvac/basis.hpp"
#include "cqedvac/manybody.hpp"

namespace cqedvac::asymptotics {

/// alpha_k = g sqrt(2) i^k / (k^1.5 sin(pi / 2N)) for odd k, 0 for even k.
std::vector<cplx> coherent_amplitudes(int N, int n_modes, double g);

/// Displacements i Omega_k psi_k / omega_k of the shifted-boson ground state
/// for an arbitrary pseudospin configuration (entries +1 / -1).
std::vector<cplx> displacements(const manybody::ManyBodySpec& spec, std::span<const int> signs);

/// Smallest cutoff whose Poisson weight sum_{n <= c} |alpha|^2n e^-|alpha|^2 / n!
/// reaches `mass`.
int minimum_cutoff(double abs_alpha, double mass = 0.999);

/// Truncated, renormalized coherent amplitudes c_n, n = 0..cutoff.
std::vector<cplx> truncated_coherent(cplx alpha, int cutoff);

/// Product state: every spin in the sigma_x eigenstate of eigenvalue `sign`
/// and mode k in the coherent state of amplitude sign * alpha_k, on the
/// unrestricted space of spec. Throws CutoffError when a mode keeps less than
/// 0.999 of its Poisson weight.
Wavefunction asymptotic_vacuum(const manybody::ManyBodySpec& spec, int sign);

struct SubspaceOverlap {
  /// Cosines of the two principal angles, descending.
  std::array<double, 2> cosines{};
  /// Norm of the projection of each (orthonormalized) first-pair vector
  /// onto the second subspace.
  std::array<double, 2> per_vector{};
  /// Product of the cosines.
  double fidelity = 0.0;
};

/// Basis-independent comparison of span{a0, a1} and span{b0, b1}. Sector
/// states are embedded into the full space of the same truncation; any other
/// basis mismatch is a DomainError, as is a rank-deficient pair.
SubspaceOverlap subspace_overlap(const Wavefunction& a0, const Wavefunction& a1,
                                 const Wavefunction& b0, const Wavefunction& b1);

/// Nominal Omega_k / Omega_1 of a chain (no extra normalization on k = N).
std::vector<double> chain_mode_ratios(int N, int n_modes);

struct PseudospinMinimum {
  std::vector<std::vector<int>> minimizers;  // entries +1 / -1
  /// Energies in units of g^2 omega_1 for every configuration, indexed by the
  /// bit pattern (bit j set = atom j in |->).
  std::vector<double> energies;
  double minimum = 0.0;
};

inline constexpr int max_brute_force_atoms = 20;

/// Brute force over all 2^N configurations of
///   E(S) / (g^2 omega_1) = -2 sum_{j,j'} mu(j) Q(j,j') mu(j'),
///   Q(j,j') = sum_k f_k(j) (r_k^2 / k) f_k(j').
/// profile[k][j] = f_{k+1}(x_j), mode_ratios[k] = Omega_{k+1} / Omega_1.
PseudospinMinimum minimize_pseudospin_config(const std::vector<std::vector<double>>& profile,
                                             std::span<const double> mode_ratios);

/// Chain geometry with N_m modes.
PseudospinMinimum minimize_pseudospin_config(int N, int n_modes);

/// -sum_k Omega_k^2 psi_k^2 / omega_k for the configuration (bosonic ground
/// energy of H_res + H_coupling, spin energy excluded).
double configuration_energy(const manybody::ManyBodySpec& spec, std::span<const int> signs);
double ferromagnetic_energy(const manybody::ManyBodySpec& spec);

/// (omega_F^2 / 2 omega_1) sqrt(pi / 2g^2) exp(-8 g^2); g <= 0 is a DomainError.
double analytic_splitting_N2(double omega_F, double omega_1, double g);

/// Second-order series before its large-g approximation:
/// (omega_F^2 / omega_1) e^{-4g^2} sum_n (-4g^2)^n / ((4g^2 + n) n!).
double splitting_series_N2(double omega_F, double omega_1, double g);

/// 2 omega_1 N! prod_j (omega_F,j / 2 omega_1) exp(-beta g^2). The product
/// keeps its sign so that ensemble statistics follow the formula.
double analytic_splitting_general(int N, int n_modes, double g,
                                  std::span<const double> omega_F_per_site, double omega_1);

/// (4 / sin^2(pi / 2N)) sum_{odd k <= N_m} 1 / k^3. Throws std::logic_error if
/// the result leaves (1.6 N^2, 2.1 N^2).
double beta_exponent(int N, int n_modes);

}  // namespace cqedvac::asymptotics
