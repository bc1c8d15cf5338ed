#pragma once

// Single fluxonium at the flux sweet spot:
//   H = 4 E_CJ N^2 + (E_LJ / 2) phi^2 + E_J cos(phi),  N = -i d/dphi,
// solved on a uniform extended-flux grid with hard walls. Energies come out
// in whatever unit the three input energies share.

#include <vector>

namespace cqedvac::fluxonium {

struct FluxoniumSpec {
  double E_J = 0.0;
  double E_CJ = 0.0;
  double E_LJ = 0.0;
  double grid_half_width = 6.0 * 3.14159265358979323846;  // Phi_max, >= 4 pi
  int grid_points = 801;                                   // odd, >= 201
  /// Largest accepted level shift between the M and 2M-1 point grids, relative
  /// to the width of the requested part of the spectrum.
  double tolerance = 1e-2;
};

struct FluxoniumLevels {
  std::vector<double> energies;  // ascending, Richardson-extrapolated
  double phi01 = 0.0;            // |<0|phi|1>|, extrapolated
  double phi00 = 0.0;            // <0|phi|0>, zero by parity
  double omega_F = 0.0;          // E1 - E0
  double grid_shift = 0.0;       // relative level shift between the two grids
  std::vector<double> grid;      // flux grid of the base solve
  std::vector<std::vector<double>> wavefunctions;  // base grid, unit L2 norm
};

struct TwoLevelReduction {
  double omega_F = 0.0;
  double phi01 = 0.0;
  double anharmonicity = 0.0;  // (E2 - E1) / (E1 - E0)
  bool weakly_anharmonic = false;  // anharmonicity < 2
};

void validate(const FluxoniumSpec& spec);

/// Lowest n_levels eigenpairs (n_levels >= 2). Throws ConvergenceError when
/// the grid refinement moves the levels by more than spec.tolerance.
FluxoniumLevels solve_levels(const FluxoniumSpec& spec, int n_levels);

TwoLevelReduction two_level_reduction(const FluxoniumLevels& levels);

}  // namespace cqedvac::fluxonium
