#pragma once

// 4x4 Bogoliubov blocks of the bosonized chain Hamiltonian. Each resonator
// mode k couples only to the collective atomic excitation of matching
// symmetry, so the problem splits into independent (a_k, b_k, a_k^+, b_k^+)
// blocks.

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace cqedvac::hopfield {

using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;

struct HopfieldBlock {
  double omega_k = 0.0;
  double omega_F = 0.0;
  double Omega_k = 0.0;
};

struct PolaritonResult {
  double lower = 0.0;
  double upper = 0.0;
  bool stable = true;
  /// Magnitude of the imaginary eigenvalue pair when unstable, else 0.
  double imaginary = 0.0;
  double determinant = 0.0;
};

struct BranchRow {
  double Omega = 0.0;
  PolaritonResult result;
};

/// Bogoliubov metric diag(1, 1, -1, -1).
Matrix4c metric();

/// Dynamical matrix whose eigenvalues are the excitation frequencies +-w.
/// It is the metric times the Hermitian quadratic-form kernel, hence
/// pseudo-Hermitian: M^+ = eta M eta.
Matrix4c build_matrix(const HopfieldBlock& b);

/// omega_k omega_F (omega_k omega_F - 4 Omega_k^2); checked against the LU
/// determinant of build_matrix to relative 1e-10 (throws std::logic_error).
double determinant(const HopfieldBlock& b);

double critical_coupling(double omega_k, double omega_F);

/// Roots of the biquadratic characteristic polynomial
///   l^4 - (omega_k^2 + omega_F^2) l^2 + det = 0.
PolaritonResult polariton_frequencies(const HopfieldBlock& b);

/// Evaluates the template block at each Omega of an ascending grid.
std::vector<BranchRow> branch_sweep(const HopfieldBlock& block, std::span<const double> omega_grid);

}  // namespace cqedvac::hopfield
