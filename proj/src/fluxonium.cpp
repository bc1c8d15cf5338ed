#include "cqedvac/fluxonium.hpp"

#include <lapacke.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cqedvac/error.hpp"

namespace cqedvac::fluxonium {

namespace {

struct GridSolution {
  std::vector<double> grid;
  std::vector<double> energies;
  std::vector<std::vector<double>> states;  // normalized with sum |psi|^2 dphi = 1
  double step = 0.0;
};

GridSolution solve_grid(const FluxoniumSpec& spec, int points, int n_levels) {
  const double width = spec.grid_half_width;
  const double h = 2.0 * width / (points - 1);
  const double kinetic = 4.0 * spec.E_CJ / (h * h);

  GridSolution out;
  out.step = h;
  out.grid.resize(points);
  std::vector<double> diag(points);
  std::vector<double> off(points - 1, -kinetic);
  for (int m = 0; m < points; ++m) {
    const double phi = -width + m * h;
    out.grid[m] = phi;
    diag[m] = 2.0 * kinetic + 0.5 * spec.E_LJ * phi * phi + spec.E_J * std::cos(phi);
  }

  lapack_int found = 0;
  std::vector<double> w(points);
  std::vector<double> z(static_cast<size_t>(points) * n_levels);
  std::vector<lapack_int> support(2 * static_cast<size_t>(n_levels));
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', points, diag.data(), off.data(), 0.0, 0.0, 1,
                     n_levels, 0.0, &found, w.data(), z.data(), points, support.data());
  if (info != 0 || found != n_levels) {
    throw ConvergenceError("fluxonium: tridiagonal eigensolver failed (info=" +
                               std::to_string(info) + ")",
                           {});
  }

  const double norm_scale = 1.0 / std::sqrt(h);
  out.energies.assign(w.begin(), w.begin() + n_levels);
  out.states.resize(n_levels);
  for (int i = 0; i < n_levels; ++i) {
    auto& psi = out.states[i];
    psi.assign(z.begin() + static_cast<long>(i) * points, z.begin() + static_cast<long>(i + 1) * points);
    for (double& x : psi) x *= norm_scale;
  }

  // Sign convention: psi0 positive in the mean, <0|phi|i> >= 0 for odd states,
  // <0|i> orientation for even states fixed by the value at the grid centre.
  auto& ground = out.states[0];
  if (std::accumulate(ground.begin(), ground.end(), 0.0) < 0.0) {
    for (double& x : ground) x = -x;
  }
  for (int i = 1; i < n_levels; ++i) {
    auto& psi = out.states[i];
    double dipole = 0.0;
    for (int m = 0; m < points; ++m) dipole += ground[m] * out.grid[m] * psi[m];
    double orientation = std::abs(dipole) > 1e-12 ? dipole : psi[points / 2];
    if (orientation < 0.0) {
      for (double& x : psi) x = -x;
    }
  }
  return out;
}

double flux_element(const GridSolution& s, int i, int j) {
  double acc = 0.0;
  for (size_t m = 0; m < s.grid.size(); ++m) acc += s.states[i][m] * s.grid[m] * s.states[j][m];
  return acc * s.step;
}

}  // namespace

void validate(const FluxoniumSpec& spec) {
  if (!(spec.E_J >= 0.0)) throw DomainError("fluxonium: E_J must be >= 0");
  if (!(spec.E_CJ > 0.0) || !(spec.E_LJ > 0.0)) {
    throw DomainError("fluxonium: E_CJ and E_LJ must be > 0");
  }
  if (spec.grid_points < 201 || spec.grid_points % 2 == 0) {
    throw DomainError("fluxonium: grid_points must be odd and >= 201");
  }
  if (spec.grid_half_width < 4.0 * std::numbers::pi) {
    throw DomainError("fluxonium: grid_half_width must be >= 4 pi");
  }
  if (!(spec.tolerance > 0.0)) throw DomainError("fluxonium: tolerance must be > 0");
}

FluxoniumLevels solve_levels(const FluxoniumSpec& spec, int n_levels) {
  validate(spec);
  if (n_levels < 2) throw DomainError("fluxonium: need at least 2 levels");

  const GridSolution coarse = solve_grid(spec, spec.grid_points, n_levels);
  const GridSolution fine = solve_grid(spec, 2 * spec.grid_points - 1, n_levels);

  // The step halves exactly between the two grids, so the O(h^2) error of the
  // three-point stencil cancels in (4 fine - coarse) / 3.
  FluxoniumLevels out;
  out.energies.resize(n_levels);
  double shift = 0.0;
  for (int i = 0; i < n_levels; ++i) {
    out.energies[i] = (4.0 * fine.energies[i] - coarse.energies[i]) / 3.0;
    shift = std::max(shift, std::abs(fine.energies[i] - coarse.energies[i]));
  }
  const double width = std::max(fine.energies.back() - fine.energies.front(),
                                std::numeric_limits<double>::min());
  out.grid_shift = shift / width;

  const double p_coarse = std::abs(flux_element(coarse, 0, 1));
  const double p_fine = std::abs(flux_element(fine, 0, 1));
  out.phi01 = (4.0 * p_fine - p_coarse) / 3.0;
  out.phi00 = flux_element(fine, 0, 0);
  out.omega_F = out.energies[1] - out.energies[0];
  out.grid = coarse.grid;
  out.wavefunctions = coarse.states;

  if (out.grid_shift > spec.tolerance) {
    throw ConvergenceError("fluxonium: levels moved by " + std::to_string(out.grid_shift) +
                               " (relative) between grid refinements; tolerance " +
                               std::to_string(spec.tolerance),
                           {out.grid_shift});
  }
  return out;
}

TwoLevelReduction two_level_reduction(const FluxoniumLevels& levels) {
  if (levels.energies.size() < 3) {
    throw DomainError("two_level_reduction: need at least 3 levels");
  }
  const auto& e = levels.energies;
  TwoLevelReduction r;
  r.omega_F = e[1] - e[0];
  r.phi01 = levels.phi01;
  r.anharmonicity = (e[2] - e[1]) / (e[1] - e[0]);
  r.weakly_anharmonic = r.anharmonicity < 2.0;
  return r;
}

}  // namespace cqedvac::fluxonium
