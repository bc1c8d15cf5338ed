#include "cqedvac/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cqedvac/asymptotics.hpp"
#include "cqedvac/error.hpp"

namespace cqedvac::manybody {

namespace {

constexpr double pi = std::numbers::pi;

void check_basis(const ManyBodySpec& spec, const BasisIndexer& basis) {
  if (basis.n_atoms() != spec.n_atoms() || basis.cutoffs() != spec.cutoffs) {
    throw DomainError("manybody: wavefunction basis does not match the ManyBodySpec (dimension mismatch)");
  }
}

}  // namespace

double ManyBodySpec::coupling() const {
  if (omega_mode.empty() || rabi.empty()) return 0.0;
  return rabi[0] / (std::sqrt(static_cast<double>(n_atoms())) * omega_mode[0]);
}

void validate(const ManyBodySpec& spec) {
  const int N = spec.n_atoms();
  const int M = spec.n_modes();
  if (N < 1) throw DomainError("manybody: need at least one atom");
  if (M < 1) throw DomainError("manybody: need at least one mode");
  if (static_cast<int>(spec.rabi.size()) != M || static_cast<int>(spec.cutoffs.size()) != M ||
      static_cast<int>(spec.weights.size()) != M) {
    throw DomainError("manybody: per-mode lists have inconsistent lengths");
  }
  for (int k = 0; k < M; ++k) {
    if (static_cast<int>(spec.weights[static_cast<std::size_t>(k)].size()) != N) {
      throw DomainError("manybody: weight row " + std::to_string(k + 1) + " has wrong length");
    }
    if (spec.cutoffs[static_cast<std::size_t>(k)] < 1) {
      throw DomainError("manybody: cutoffs must be >= 1");
    }
    if (!(spec.omega_mode[static_cast<std::size_t>(k)] > 0.0)) {
      throw DomainError("manybody: mode frequencies must be > 0");
    }
  }
  for (double w : spec.omega_F) {
    if (!std::isfinite(w)) throw DomainError("manybody: atomic frequencies must be finite");
  }
}

std::vector<std::vector<double>> chain_profile(int N, int n_modes) {
  if (N < 1 || n_modes < 1 || n_modes > N) {
    throw DomainError("chain_profile: need 1 <= N_m <= N");
  }
  std::vector<std::vector<double>> f(static_cast<std::size_t>(n_modes),
                                     std::vector<double>(static_cast<std::size_t>(N)));
  for (int k = 1; k <= n_modes; ++k) {
    for (int j = 1; j <= N; ++j) {
      const double arg = k * pi * (j - 0.5 * (N + 1)) / N;
      f[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)] =
          (k % 2 == 1) ? std::cos(arg) : std::sin(arg);
    }
  }
  return f;
}

std::vector<std::vector<double>> chain_weights(int N, int n_modes) {
  auto w = chain_profile(N, n_modes);
  for (int k = 1; k <= n_modes; ++k) {
    const double norm = (k == N) ? 1.0 / std::sqrt(static_cast<double>(N))
                                 : std::sqrt(2.0 / N);
    for (double& x : w[static_cast<std::size_t>(k - 1)]) x *= norm;
  }
  return w;
}

std::vector<double> chain_rabi(int N, int n_modes, double g, double omega_1) {
  if (N < 1 || n_modes < 1 || n_modes > N) throw DomainError("chain_rabi: need 1 <= N_m <= N");
  if (g < 0.0) throw DomainError("chain_rabi: g must be >= 0");
  const double rabi_1 = g * std::sqrt(static_cast<double>(N)) * omega_1;
  const double s1 = std::sin(pi / (2.0 * N));
  std::vector<double> out;
  for (int k = 1; k <= n_modes; ++k) {
    double ratio = std::sin(k * pi / (2.0 * N)) / (s1 * std::sqrt(static_cast<double>(k)));
    if (k == N) ratio *= std::sqrt(2.0);
    out.push_back(rabi_1 * ratio);
  }
  return out;
}

ManyBodySpec chain_spec(int N, int n_modes, double g, double omega_F, double omega_1,
                        std::vector<int> cutoffs) {
  ManyBodySpec s;
  s.omega_F.assign(static_cast<std::size_t>(N), omega_F);
  for (int k = 1; k <= n_modes; ++k) s.omega_mode.push_back(k * omega_1);
  s.rabi = chain_rabi(N, n_modes, g, omega_1);
  s.cutoffs = std::move(cutoffs);
  s.weights = chain_weights(N, n_modes);
  validate(s);
  return s;
}

BasisIndexer make_indexer(const ManyBodySpec& spec, Sector sector) {
  validate(spec);
  return BasisIndexer(spec.n_atoms(), spec.cutoffs, sector);
}

HamiltonianOperator::HamiltonianOperator(const ManyBodySpec& spec, BasisIndexer basis)
    : basis_(std::move(basis)), n_atoms_(spec.n_atoms()), n_modes_(spec.n_modes()) {
  validate(spec);
  check_basis(spec, basis_);
  const std::size_t spin_states = std::size_t{1} << n_atoms_;
  spin_energy_.resize(spin_states);
  for (std::size_t s = 0; s < spin_states; ++s) {
    double e = 0.0;
    for (int j = 0; j < n_atoms_; ++j) {
      e += 0.5 * spec.omega_F[static_cast<std::size_t>(j)] * (((s >> j) & 1U) ? 1.0 : -1.0);
    }
    spin_energy_[s] = e;
  }
  mode_energy_ = spec.omega_mode;
  weights_.resize(static_cast<std::size_t>(n_modes_ * n_atoms_));
  raise_.resize(static_cast<std::size_t>(n_modes_));
  lower_.resize(static_cast<std::size_t>(n_modes_));
  for (int k = 0; k < n_modes_; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (int j = 0; j < n_atoms_; ++j) {
      weights_[ku * static_cast<std::size_t>(n_atoms_) + static_cast<std::size_t>(j)] =
          spec.weights[ku][static_cast<std::size_t>(j)];
    }
    const int cut = spec.cutoffs[ku];
    const cplx iW(0.0, spec.rabi[ku]);
    raise_[ku].resize(static_cast<std::size_t>(cut) + 1);
    lower_[ku].resize(static_cast<std::size_t>(cut) + 1);
    for (int n = 0; n <= cut; ++n) {
      raise_[ku][static_cast<std::size_t>(n)] = iW * std::sqrt(n + 1.0);
      lower_[ku][static_cast<std::size_t>(n)] = -iW * std::sqrt(static_cast<double>(n));
    }
  }
}

template <class T>
void HamiltonianOperator::apply_impl(const T* in, T* out) const {
  using R = typename T::value_type;
  const std::size_t block = basis_.spin_block();
  const std::size_t configs = basis_.mode_configurations();
  const int N = n_atoms_;
  std::vector<int> occ(static_cast<std::size_t>(n_modes_), 0);
  int photons = 0;

  for (std::size_t m = 0; m < configs; ++m) {
    R photon_energy = 0.0;
    for (int k = 0; k < n_modes_; ++k) {
      photon_energy += static_cast<R>(mode_energy_[static_cast<std::size_t>(k)]) * occ[static_cast<std::size_t>(k)];
    }
    const unsigned pp = static_cast<unsigned>(photons) & 1U;
    const std::size_t row = m * block;

    for (std::size_t r = 0; r < block; ++r) {
      const std::uint32_t s = basis_.spins_from_rank(r, pp);
      T acc = (photon_energy + static_cast<R>(spin_energy_[s])) * in[row + r];

      for (int k = 0; k < n_modes_; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const int n = occ[ku];
        const double* w = &weights_[ku * static_cast<std::size_t>(N)];
        if (n < basis_.cutoffs()[ku]) {
          const std::size_t base = (m + basis_.mode_stride(k)) * block;
          T sum = 0.0;
          for (int j = 0; j < N; ++j) sum += static_cast<R>(w[j]) * in[base + basis_.rank_of_spins(s ^ (1U << j))];
          acc += T(raise_[ku][static_cast<std::size_t>(n)]) * sum;
        }
        if (n > 0) {
          const std::size_t base = (m - basis_.mode_stride(k)) * block;
          T sum = 0.0;
          for (int j = 0; j < N; ++j) sum += static_cast<R>(w[j]) * in[base + basis_.rank_of_spins(s ^ (1U << j))];
          acc += T(lower_[ku][static_cast<std::size_t>(n)]) * sum;
        }
      }
      out[row + r] = acc;
    }

    // Odometer increment of the occupations.
    for (int k = 0; k < n_modes_; ++k) {
      auto& o = occ[static_cast<std::size_t>(k)];
      if (o < basis_.cutoffs()[static_cast<std::size_t>(k)]) {
        ++o;
        ++photons;
        break;
      }
      photons -= o;
      o = 0;
    }
  }
}

void HamiltonianOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != dimension() || out.size() != dimension()) {
    throw DomainError("HamiltonianOperator: vector size does not match the basis");
  }
  apply_impl(in.data(), out.data());
}

long double HamiltonianOperator::rayleigh_quotient(std::span<const cplx> v) const {
  using X = std::complex<long double>;
  if (v.size() != dimension()) throw DomainError("rayleigh_quotient: vector size does not match the basis");
  std::vector<X> x(v.begin(), v.end()), hx(v.size());
  apply_impl(x.data(), hx.data());
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::conj(x[i]) * hx[i]).real();
    den += std::norm(x[i]);
  }
  if (!(den > 0.0L)) throw DomainError("rayleigh_quotient: zero vector");
  return num / den;
}

LinearOperator HamiltonianOperator::as_operator() const {
  return [this](std::span<const cplx> in, std::span<cplx> out) { apply(in, out); };
}

Wavefunction apply_hamiltonian(const ManyBodySpec& spec, const Wavefunction& v) {
  check_basis(spec, v.basis);
  HamiltonianOperator H(spec, v.basis);
  Wavefunction out(v.basis);
  H.apply(v.amplitudes, out.amplitudes);
  return out;
}

Wavefunction parity_apply(const ManyBodySpec& spec, const Wavefunction& v) {
  check_basis(spec, v.basis);
  Wavefunction out = v;
  const auto& b = v.basis;
  std::vector<int> occ(static_cast<std::size_t>(b.n_modes()));
  for (std::size_t m = 0; m < b.mode_configurations(); ++m) {
    b.decode_modes(m, occ);
    const unsigned pp = static_cast<unsigned>(std::accumulate(occ.begin(), occ.end(), 0)) & 1U;
    for (std::size_t r = 0; r < b.spin_block(); ++r) {
      const std::uint32_t s = b.spins_from_rank(r, pp);
      if (b.parity(s, occ) < 0) out.amplitudes[m * b.spin_block() + r] *= -1.0;
    }
  }
  return out;
}

Wavefunction apply_site_perturbation(std::span<const double> delta, const Wavefunction& v) {
  const auto& b = v.basis;
  if (static_cast<int>(delta.size()) != b.n_atoms()) {
    throw DomainError("apply_site_perturbation: need one Delta per atom");
  }
  const std::size_t spin_states = std::size_t{1} << b.n_atoms();
  std::vector<double> diag(spin_states, 0.0);
  for (std::size_t s = 0; s < spin_states; ++s) {
    for (int j = 0; j < b.n_atoms(); ++j) {
      diag[s] += 0.5 * delta[static_cast<std::size_t>(j)] * (((s >> j) & 1U) ? 1.0 : -1.0);
    }
  }
  Wavefunction out = v;
  std::vector<int> occ(static_cast<std::size_t>(b.n_modes()));
  for (std::size_t m = 0; m < b.mode_configurations(); ++m) {
    b.decode_modes(m, occ);
    const unsigned pp = static_cast<unsigned>(std::accumulate(occ.begin(), occ.end(), 0)) & 1U;
    for (std::size_t r = 0; r < b.spin_block(); ++r) {
      out.amplitudes[m * b.spin_block() + r] *= diag[b.spins_from_rank(r, pp)];
    }
  }
  return out;
}

SpectrumResult lowest_spectrum(const ManyBodySpec& spec, Sector sector, int count,
                               const SpectrumOptions& opts) {
  if (count < 1) throw DomainError("lowest_spectrum: count must be >= 1");
  if (!(opts.tolerance > 0.0)) throw DomainError("lowest_spectrum: tolerance must be > 0");
  HamiltonianOperator H(spec, make_indexer(spec, sector));
  const std::size_t dim = H.dimension();
  if (static_cast<std::size_t>(count) > dim) {
    throw DomainError("lowest_spectrum: more levels requested than the space holds");
  }

  const bool dense = opts.method == SolverMethod::dense ||
                     (opts.method == SolverMethod::automatic && dim <= opts.dense_limit);
  EigenPairs pairs;
  if (dense) {
    pairs = dense_lowest(H.as_operator(), dim, count);
  } else {
    std::vector<cplx> start(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    LanczosOptions lo;
    lo.count = count;
    lo.tolerance = opts.tolerance;
    lo.max_matvecs = opts.max_matvecs;
    lo.basis_size = opts.basis_size;
    pairs = lanczos_lowest(H.as_operator(), dim, start, lo);
  }

  SpectrumResult out;
  out.dense = dense;
  out.matvecs = pairs.matvecs;
  out.eigenvalues = pairs.values;
  out.residuals = pairs.residuals;
  for (std::size_t i = 0; i < pairs.vectors.size(); ++i) {
    Wavefunction v(H.basis(), std::move(pairs.vectors[i]));
    Sector label = sector;
    if (sector == Sector::full) {
      // Eigenvectors of a parity-symmetric H are parity eigenstates unless
      // degenerate; label by the sign of <v|Pi|v>.
      const double expect = inner_product(v, parity_apply(spec, v)).real();
      label = expect >= 0.0 ? Sector::even : Sector::odd;
    }
    out.sectors.push_back(label);
    out.states.push_back(std::move(v));
  }
  return out;
}

SplittingWithStates ground_doublet(const ManyBodySpec& spec, const SpectrumOptions& opts) {
  auto even = lowest_spectrum(spec, Sector::even, 1, opts);
  auto odd = lowest_spectrum(spec, Sector::odd, 1, opts);
  SplittingRecord r;
  r.N = spec.n_atoms();
  r.n_modes = spec.n_modes();
  r.g = spec.coupling();
  r.cutoffs = spec.cutoffs;
  // Round-off in the double matvec is ~eps ||H||, far above the splitting
  // deep in the ultrastrong regime; the extended-precision quotient is
  // second order in the eigenvector error.
  const long double qe = HamiltonianOperator(spec, even.states[0].basis).rayleigh_quotient(even.states[0].amplitudes);
  const long double qo = HamiltonianOperator(spec, odd.states[0].basis).rayleigh_quotient(odd.states[0].amplitudes);
  r.E_even = static_cast<double>(qe);
  r.E_odd = static_cast<double>(qo);
  r.delta = static_cast<double>(qe > qo ? qe - qo : qo - qe);
  const double wf = std::accumulate(spec.omega_F.begin(), spec.omega_F.end(), 0.0) / spec.n_atoms();
  r.delta_over_omega_F = wf != 0.0 ? r.delta / std::abs(wf) : r.delta;
  r.below_floor = r.delta_over_omega_F < splitting_floor;
  return {std::move(r), std::move(even.states[0]), std::move(odd.states[0])};
}

SplittingRecord ground_splitting(const ManyBodySpec& spec, const SpectrumOptions& opts) {
  return ground_doublet(spec, opts).record;
}

std::vector<int> choose_cutoffs(int N, int n_modes, double g, double safety, int floor) {
  if (!(safety >= 1.0)) throw DomainError("choose_cutoffs: safety must be >= 1");
  if (floor < 1) throw DomainError("choose_cutoffs: floor must be >= 1");
  const auto alpha = asymptotics::coherent_amplitudes(N, n_modes, g);
  std::vector<int> cut;
  for (const auto& a : alpha) {
    const double r = std::abs(a);
    if (r == 0.0) {
      cut.push_back(floor);
    } else {
      cut.push_back(std::max(floor, static_cast<int>(std::ceil(r * r + safety * r + safety * safety))));
    }
  }
  return cut;
}

std::vector<std::vector<int>> default_cutoff_schedule(int N, int n_modes, double g) {
  return {choose_cutoffs(N, n_modes, g, 3.0, 8), choose_cutoffs(N, n_modes, g, 4.0, 12),
          choose_cutoffs(N, n_modes, g, 5.0, 16)};
}

bool refinement_agrees(const SplittingRecord& coarse, const SplittingRecord& fine,
                       const ConvergenceCriteria& criteria) {
  if (!fine.below_floor && !coarse.below_floor) {
    return std::abs(fine.delta - coarse.delta) <= criteria.relative_delta * fine.delta;
  }
  if (fine.below_floor && coarse.below_floor) {
    const double scale = std::max(1.0, std::abs(fine.E_even));
    return std::abs(fine.E_even - coarse.E_even) <= criteria.relative_energy * scale &&
           std::abs(fine.E_odd - coarse.E_odd) <= criteria.relative_energy * scale;
  }
  return false;
}

std::vector<SplittingRecord> convergence_scan(const ManyBodySpec& spec,
                                              const std::vector<std::vector<int>>& schedule,
                                              const ConvergenceCriteria& criteria,
                                              const SpectrumOptions& opts) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].size() != spec.cutoffs.size()) {
      throw DomainError("convergence_scan: schedule level has wrong mode count");
    }
    if (i == 0) continue;
    bool grew = false;
    for (std::size_t k = 0; k < schedule[i].size(); ++k) {
      if (schedule[i][k] < schedule[i - 1][k]) {
        throw DomainError("convergence_scan: schedule must not shrink any cutoff");
      }
      grew = grew || schedule[i][k] > schedule[i - 1][k];
    }
    if (!grew) throw DomainError("convergence_scan: schedule must be strictly increasing");
  }

  std::vector<SplittingRecord> out;
  for (const auto& level : schedule) {
    ManyBodySpec s = spec;
    s.cutoffs = level;
    auto rec = ground_splitting(s, opts);
    if (!out.empty()) rec.converged = refinement_agrees(out.back(), rec, criteria);
    out.push_back(std::move(rec));
  }
  return out;
}

SplittingRecord converged_splitting(const ManyBodySpec& spec,
                                    const std::vector<std::vector<int>>& schedule,
                                    const ConvergenceCriteria& criteria,
                                    const SpectrumOptions& opts) {
  if (schedule.empty()) throw DomainError("converged_splitting: empty schedule");
  return convergence_scan(spec, schedule, criteria, opts).back();
}

}  // namespace cqedvac::manybody
