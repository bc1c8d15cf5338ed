#pragma once

// Lowest eigenpairs of a Hermitian operator known only through its action on
// vectors. Thick-restart Lanczos with full (two-pass Gram-Schmidt)
// reorthogonalization; the projected matrix is kept explicitly, which makes
// the restart step a plain Rayleigh-Ritz update.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cqedvac {

using LinearOperator =
    std::function<void(std::span<const std::complex<double>>, std::span<std::complex<double>>)>;

struct LanczosOptions {
  int count = 1;
  /// Absolute bound on ||H v - lambda v|| for every returned pair.
  double tolerance = 1e-9;
  /// Krylov basis size before a restart; 0 picks max(2 count + 20, 30).
  int basis_size = 0;
  int max_matvecs = 20000;
  /// Seed for replacement directions after an exact invariant subspace.
  unsigned long long seed = 0x5eed5eedULL;
};

struct EigenPairs {
  std::vector<double> values;
  std::vector<std::vector<std::complex<double>>> vectors;
  std::vector<double> residuals;  // explicitly recomputed
  int matvecs = 0;
  int restarts = 0;
};

/// `start` must be nonzero; it is normalized internally. Throws
/// ConvergenceError carrying the best residuals when max_matvecs runs out.
EigenPairs lanczos_lowest(const LinearOperator& op, std::size_t dimension,
                          std::span<const std::complex<double>> start, const LanczosOptions& opts);

/// Dense Hermitian eigensolve of the operator assembled column by column.
EigenPairs dense_lowest(const LinearOperator& op, std::size_t dimension, int count);

}  // namespace cqedvac
