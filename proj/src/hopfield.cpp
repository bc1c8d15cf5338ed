#include "cqedvac/hopfield.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cqedvac/error.hpp"

namespace cqedvac::hopfield {

namespace {

void validate(const HopfieldBlock& b) {
  if (!(b.omega_k > 0.0) || !(b.omega_F > 0.0)) {
    throw DomainError("hopfield: omega_k and omega_F must be > 0");
  }
  if (!(b.Omega_k >= 0.0)) throw DomainError("hopfield: Omega_k must be >= 0");
}

double closed_form_determinant(const HopfieldBlock& b) {
  const double p = b.omega_k * b.omega_F;
  return p * (p - 4.0 * b.Omega_k * b.Omega_k);
}

}  // namespace

Matrix4c metric() {
  Matrix4c eta = Matrix4c::Zero();
  eta.diagonal() << 1.0, 1.0, -1.0, -1.0;
  return eta;
}

Matrix4c build_matrix(const HopfieldBlock& b) {
  validate(b);
  const std::complex<double> iW(0.0, b.Omega_k);
  const double wk = b.omega_k;
  const double wf = b.omega_F;
  Matrix4c m;
  // clang-format off
  m <<  wk, -iW, 0.0, -iW,
        iW,  wf, -iW, 0.0,
       0.0, -iW, -wk, -iW,
       -iW, 0.0,  iW, -wf;
  // clang-format on
  return m;
}

double determinant(const HopfieldBlock& b) {
  const double closed = closed_form_determinant(b);
  const std::complex<double> numeric = build_matrix(b).determinant();
  const double scale = std::pow(std::max({b.omega_k, b.omega_F, b.Omega_k}), 4);
  if (std::abs(numeric - closed) > 1e-10 * std::max(std::abs(closed), 1e-4 * scale)) {
    throw std::logic_error("hopfield: closed-form determinant " + std::to_string(closed) +
                           " disagrees with numeric " + std::to_string(numeric.real()));
  }
  return closed;
}

double critical_coupling(double omega_k, double omega_F) {
  if (!(omega_k > 0.0) || !(omega_F > 0.0)) {
    throw DomainError("critical_coupling: frequencies must be > 0");
  }
  return 0.5 * std::sqrt(omega_k * omega_F);
}

PolaritonResult polariton_frequencies(const HopfieldBlock& b) {
  validate(b);
  const double sum = b.omega_k * b.omega_k + b.omega_F * b.omega_F;
  const double diff = b.omega_k * b.omega_k - b.omega_F * b.omega_F;
  const double det = closed_form_determinant(b);
  const double root =
      std::sqrt(diff * diff + 16.0 * b.Omega_k * b.Omega_k * b.omega_k * b.omega_F);
  const double upper_sq = 0.5 * (sum + root);
  // Product of the two roots is det; dividing avoids cancellation near the
  // critical point.
  const double lower_sq = det / upper_sq;

  PolaritonResult r;
  r.determinant = det;
  r.upper = std::sqrt(upper_sq);
  if (lower_sq >= 0.0) {
    r.lower = std::sqrt(lower_sq);
  } else {
    r.stable = false;
    r.lower = 0.0;
    r.imaginary = std::sqrt(-lower_sq);
  }
  if (r.lower > r.upper) std::swap(r.lower, r.upper);
  return r;
}

std::vector<BranchRow> branch_sweep(const HopfieldBlock& block, std::span<const double> omega_grid) {
  if (!std::is_sorted(omega_grid.begin(), omega_grid.end())) {
    throw DomainError("branch_sweep: grid must be ascending");
  }
  std::vector<BranchRow> rows;
  rows.reserve(omega_grid.size());
  for (double omega : omega_grid) {
    HopfieldBlock b = block;
    b.Omega_k = omega;
    rows.push_back({omega, polariton_frequencies(b)});
  }
  return rows;
}

}  // namespace cqedvac::hopfield
