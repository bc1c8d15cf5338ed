#include "cqedvac/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cqedvac/error.hpp"

namespace cqedvac::asymptotics {

namespace {

constexpr double pi = std::numbers::pi;

void check_chain(int N, int n_modes) {
  if (N < 2) throw DomainError("asymptotics: need N >= 2");
  if (n_modes < 1 || n_modes > N) throw DomainError("asymptotics: need 1 <= N_m <= N");
}

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

std::vector<cplx> coherent_amplitudes(int N, int n_modes, double g) {
  check_chain(N, n_modes);
  if (g < 0.0) throw DomainError("coherent_amplitudes: g must be >= 0");
  const double s = std::sin(pi / (2.0 * N));
  std::vector<cplx> out(static_cast<std::size_t>(n_modes), cplx(0.0, 0.0));
  for (int k = 1; k <= n_modes; k += 2) {
    out[static_cast<std::size_t>(k - 1)] =
        i_power(k) * (g * std::numbers::sqrt2 / (std::pow(k, 1.5) * s));
  }
  return out;
}

std::vector<cplx> displacements(const manybody::ManyBodySpec& spec, std::span<const int> signs) {
  manybody::validate(spec);
  if (static_cast<int>(signs.size()) != spec.n_atoms()) {
    throw DomainError("displacements: need one sign per atom");
  }
  std::vector<cplx> out;
  for (int k = 0; k < spec.n_modes(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    double psi = 0.0;
    for (int j = 0; j < spec.n_atoms(); ++j) {
      psi += spec.weights[ku][static_cast<std::size_t>(j)] * signs[static_cast<std::size_t>(j)];
    }
    out.emplace_back(0.0, spec.rabi[ku] * psi / spec.omega_mode[ku]);
  }
  return out;
}

int minimum_cutoff(double abs_alpha, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("minimum_cutoff: mass must lie in (0, 1)");
  const double x = abs_alpha * abs_alpha;
  if (x == 0.0) return 0;
  double total = 0.0;
  for (int n = 0;; ++n) {
    total += std::exp(-x + n * std::log(x) - std::lgamma(n + 1.0));
    if (total >= mass) return n;
    if (n > 100000) throw DomainError("minimum_cutoff: amplitude too large");
  }
}

std::vector<cplx> truncated_coherent(cplx alpha, int cutoff) {
  if (cutoff < 0) throw DomainError("truncated_coherent: negative cutoff");
  std::vector<cplx> c(static_cast<std::size_t>(cutoff) + 1);
  c[0] = 1.0;
  for (int n = 1; n <= cutoff; ++n) {
    c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n - 1)] * alpha / std::sqrt(static_cast<double>(n));
  }
  double norm2 = 0.0;
  for (const auto& x : c) norm2 += std::norm(x);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : c) x *= inv;
  return c;
}

Wavefunction asymptotic_vacuum(const manybody::ManyBodySpec& spec, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("asymptotic_vacuum: sign must be +1 or -1");
  const int N = spec.n_atoms();
  const std::vector<int> signs(static_cast<std::size_t>(N), sign);
  const auto alpha = displacements(spec, signs);

  std::vector<std::vector<cplx>> modes;
  for (int k = 0; k < spec.n_modes(); ++k) {
    const int have = spec.cutoffs[static_cast<std::size_t>(k)];
    const int need = minimum_cutoff(std::abs(alpha[static_cast<std::size_t>(k)]));
    if (need > have) {
      throw CutoffError("asymptotic_vacuum: cutoff " + std::to_string(have) + " of mode " +
                            std::to_string(k + 1) + " too small, need >= " + std::to_string(need),
                        k + 1, need);
    }
    modes.push_back(truncated_coherent(alpha[static_cast<std::size_t>(k)], have));
  }

  BasisIndexer basis(N, spec.cutoffs, Sector::full);
  Wavefunction out(basis);
  const std::size_t spin_states = basis.spin_block();
  std::vector<double> spin_amp(spin_states);
  for (std::size_t s = 0; s < spin_states; ++s) {
    // |+-> = (|1> +- |0>) / sqrt 2
    const int zeros = N - __builtin_popcountll(s);
    spin_amp[s] = std::pow(0.5, 0.5 * N) * ((sign < 0 && (zeros & 1)) ? -1.0 : 1.0);
  }
  std::vector<int> occ(static_cast<std::size_t>(spec.n_modes()));
  for (std::size_t m = 0; m < basis.mode_configurations(); ++m) {
    basis.decode_modes(m, occ);
    cplx photon = 1.0;
    for (int k = 0; k < spec.n_modes(); ++k) {
      photon *= modes[static_cast<std::size_t>(k)][static_cast<std::size_t>(occ[static_cast<std::size_t>(k)])];
    }
    for (std::size_t s = 0; s < spin_states; ++s) out.amplitudes[m * spin_states + s] = photon * spin_amp[s];
  }
  return out;
}

SubspaceOverlap subspace_overlap(const Wavefunction& a0, const Wavefunction& a1,
                                 const Wavefunction& b0, const Wavefunction& b1) {
  const BasisIndexer full = a0.basis.unrestricted();
  auto lift = [&](const Wavefunction& v) {
    if (!(v.basis.unrestricted() == full)) {
      throw DomainError("subspace_overlap: states live on different truncations");
    }
    return v.basis.sector() == Sector::full ? v : embed_full(v);
  };
  auto orthonormal_pair = [](Wavefunction u, Wavefunction v) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (!(nu > 0.0) || !(nv > 0.0)) throw DomainError("subspace_overlap: zero vector");
    u.normalize();
    const cplx c = inner_product(u, v);
    for (std::size_t i = 0; i < v.amplitudes.size(); ++i) v.amplitudes[i] -= c * u.amplitudes[i];
    if (v.norm() < 1e-10 * nv) throw DomainError("subspace_overlap: rank-deficient pair");
    v.normalize();
    return std::array<Wavefunction, 2>{std::move(u), std::move(v)};
  };
  const auto A = orthonormal_pair(lift(a0), lift(a1));
  const auto B = orthonormal_pair(lift(b0), lift(b1));

  Eigen::Matrix2cd C;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) C(i, j) = inner_product(A[static_cast<std::size_t>(i)], B[static_cast<std::size_t>(j)]);
  }
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(C);
  SubspaceOverlap out;
  out.cosines = {std::min(1.0, svd.singularValues()(0)), std::min(1.0, svd.singularValues()(1))};
  out.per_vector = {std::min(1.0, C.row(0).norm()), std::min(1.0, C.row(1).norm())};
  out.fidelity = out.cosines[0] * out.cosines[1];
  return out;
}

std::vector<double> chain_mode_ratios(int N, int n_modes) {
  check_chain(N, n_modes);
  const double s1 = std::sin(pi / (2.0 * N));
  std::vector<double> r;
  for (int k = 1; k <= n_modes; ++k) {
    r.push_back(std::sin(k * pi / (2.0 * N)) / (s1 * std::sqrt(static_cast<double>(k))));
  }
  return r;
}

PseudospinMinimum minimize_pseudospin_config(const std::vector<std::vector<double>>& profile,
                                             std::span<const double> mode_ratios) {
  if (profile.empty() || profile.size() != mode_ratios.size()) {
    throw DomainError("minimize_pseudospin_config: need one ratio per mode profile");
  }
  const int N = static_cast<int>(profile.front().size());
  if (N < 1) throw DomainError("minimize_pseudospin_config: empty profile");
  if (N > max_brute_force_atoms) {
    throw DomainError("minimize_pseudospin_config: N = " + std::to_string(N) +
                      " too large for brute force (max " + std::to_string(max_brute_force_atoms) + ")");
  }
  for (const auto& row : profile) {
    if (static_cast<int>(row.size()) != N) throw DomainError("minimize_pseudospin_config: ragged profile");
  }

  PseudospinMinimum out;
  const std::size_t configs = std::size_t{1} << N;
  out.energies.resize(configs);
  for (std::size_t S = 0; S < configs; ++S) {
    double e = 0.0;
    for (std::size_t k = 0; k < profile.size(); ++k) {
      double psi = 0.0;
      for (int j = 0; j < N; ++j) psi += profile[k][static_cast<std::size_t>(j)] * (((S >> j) & 1U) ? -1.0 : 1.0);
      e += mode_ratios[k] * mode_ratios[k] / static_cast<double>(k + 1) * psi * psi;
    }
    out.energies[S] = -2.0 * e;
  }
  out.minimum = *std::min_element(out.energies.begin(), out.energies.end());
  const double tie = 1e-12 * std::max(1.0, std::abs(out.minimum));
  for (std::size_t S = 0; S < configs; ++S) {
    if (out.energies[S] <= out.minimum + tie) {
      std::vector<int> mu(static_cast<std::size_t>(N));
      for (int j = 0; j < N; ++j) mu[static_cast<std::size_t>(j)] = ((S >> j) & 1U) ? -1 : 1;
      out.minimizers.push_back(std::move(mu));
    }
  }
  return out;
}

PseudospinMinimum minimize_pseudospin_config(int N, int n_modes) {
  if (N < 1) throw DomainError("minimize_pseudospin_config: need N >= 1");
  if (N > max_brute_force_atoms) {
    throw DomainError("minimize_pseudospin_config: N too large for brute force");
  }
  const auto ratios = N >= 2 ? chain_mode_ratios(N, n_modes) : std::vector<double>{1.0};
  return minimize_pseudospin_config(manybody::chain_profile(N, n_modes), ratios);
}

double configuration_energy(const manybody::ManyBodySpec& spec, std::span<const int> signs) {
  const auto alpha = displacements(spec, signs);
  double e = 0.0;
  for (int k = 0; k < spec.n_modes(); ++k) {
    // Omega^2 psi^2 / omega = omega |alpha|^2
    e -= spec.omega_mode[static_cast<std::size_t>(k)] * std::norm(alpha[static_cast<std::size_t>(k)]);
  }
  return e;
}

double ferromagnetic_energy(const manybody::ManyBodySpec& spec) {
  const std::vector<int> up(static_cast<std::size_t>(spec.n_atoms()), 1);
  return configuration_energy(spec, up);
}

double analytic_splitting_N2(double omega_F, double omega_1, double g) {
  if (!(g > 0.0)) throw DomainError("analytic_splitting_N2: formula is singular at g = 0");
  if (!(omega_1 > 0.0)) throw DomainError("analytic_splitting_N2: omega_1 must be > 0");
  return omega_F * omega_F / (2.0 * omega_1) * std::sqrt(pi / (2.0 * g * g)) * std::exp(-8.0 * g * g);
}

double splitting_series_N2(double omega_F, double omega_1, double g) {
  if (!(g > 0.0)) throw DomainError("splitting_series_N2: need g > 0");
  if (!(omega_1 > 0.0)) throw DomainError("splitting_series_N2: omega_1 must be > 0");
  const long double x = 4.0L * g * g;
  const int terms = static_cast<int>(std::ceil(x + 30.0L * std::sqrt(x) + 40.0L));
  long double term = 1.0L;  // (-x)^n / n!
  long double sum = 0.0L;
  for (int n = 0; n <= terms; ++n) {
    if (n > 0) term *= -x / n;
    sum += term / (x + n);
  }
  return static_cast<double>(omega_F * omega_F / omega_1 * std::exp(-x) * sum);
}

double analytic_splitting_general(int N, int n_modes, double g,
                                  std::span<const double> omega_F_per_site, double omega_1) {
  check_chain(N, n_modes);
  if (static_cast<int>(omega_F_per_site.size()) != N) {
    throw DomainError("analytic_splitting_general: need one omega_F per atom");
  }
  if (!(omega_1 > 0.0)) throw DomainError("analytic_splitting_general: omega_1 must be > 0");
  if (g < 0.0) throw DomainError("analytic_splitting_general: g must be >= 0");
  double prefactor = 2.0 * omega_1 * std::tgamma(N + 1.0);
  for (double w : omega_F_per_site) prefactor *= w / (2.0 * omega_1);
  return prefactor * std::exp(-beta_exponent(N, n_modes) * g * g);
}

double beta_exponent(int N, int n_modes) {
  check_chain(N, n_modes);
  double sum = 0.0;
  for (int k = 1; k <= n_modes; k += 2) sum += 1.0 / (static_cast<double>(k) * k * k);
  // sin^2(pi / 2N) = (1 - cos(pi / N)) / 2, cosine as sin(pi (N - 2) / 2N): exact at N = 2
  const double s2 = 0.5 * (1.0 - std::sin(pi * (N - 2) / (2.0 * N)));
  const double beta = 4.0 / s2 * sum;
  const double n2 = static_cast<double>(N) * N;
  if (!(beta > 1.6 * n2 && beta < 2.1 * n2)) {
    throw std::logic_error("beta_exponent: result " + std::to_string(beta) +
                           " outside (1.6 N^2, 2.1 N^2)");
  }
  return beta;
}

}  // namespace cqedvac::asymptotics
