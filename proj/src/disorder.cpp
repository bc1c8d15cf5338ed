#include "cqedvac/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqedvac/asymptotics.hpp"
#include "cqedvac/error.hpp"
#include "cqedvac/parallel.hpp"

namespace cqedvac::disorder {

void validate(const DisorderEnsembleSpec& spec) {
  manybody::validate(spec.base);
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude)) {
    throw DomainError("disorder: amplitude must be >= 0");
  }
  if (spec.count < 1) throw DomainError("disorder: realization count must be >= 1");
}

std::uint64_t realization_seed(std::uint64_t seed, int r) {
  std::uint64_t z = seed + static_cast<std::uint64_t>(r) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 53-bit uniforms; u1 in (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::vector<std::vector<double>> sample_frequencies(const DisorderEnsembleSpec& spec) {
  validate(spec);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int r = 0; r < spec.count; ++r) {
    NormalStream xi(realization_seed(spec.seed, r));
    std::vector<double> w = spec.base.omega_F;
    for (double& x : w) x *= 1.0 + spec.amplitude * xi.next();
    out.push_back(std::move(w));
  }
  return out;
}

std::string to_string(Engine e) { return e == Engine::exact ? "exact" : "analytic"; }

Engine parse_engine(const std::string& text) {
  if (text == "exact") return Engine::exact;
  if (text == "analytic") return Engine::analytic;
  throw DomainError("unknown engine '" + text + "' (expected exact or analytic)");
}

EnsembleStats ensemble_splitting(const DisorderEnsembleSpec& spec, Engine engine,
                                 const EnsembleOptions& opts) {
  validate(spec);
  const auto& base = spec.base;
  const auto freqs = sample_frequencies(spec);

  EnsembleStats stats;
  stats.seed = spec.seed;
  stats.engine = engine;
  if (engine == Engine::exact &&
      BasisIndexer(base.n_atoms(), base.cutoffs).dimension() > opts.dimension_budget) {
    stats.engine = Engine::analytic;
    stats.engine_fallback = true;
  }

  stats.records.resize(freqs.size());
  parallel_for(freqs.size(), opts.jobs, [&](std::size_t r) {
    auto& rec = stats.records[r];
    rec.realization = static_cast<int>(r);
    rec.seed = realization_seed(spec.seed, static_cast<int>(r));
    rec.omega_F = freqs[r];
    try {
      if (stats.engine == Engine::analytic) {
        rec.delta = asymptotics::analytic_splitting_general(base.n_atoms(), base.n_modes(), base.coupling(),
                                                            rec.omega_F, base.omega_mode[0]);
      } else {
        manybody::ManyBodySpec s = base;
        s.omega_F = rec.omega_F;
        rec.delta = manybody::ground_splitting(s, opts.spectrum).delta;
      }
    } catch (const ConvergenceError& e) {
      rec.ok = false;
      rec.error = e.what();
    }
  });

  double sum = 0.0;
  double sum2 = 0.0;
  int n = 0;
  for (const auto& rec : stats.records) {
    if (!rec.ok) {
      ++stats.failures;
      continue;
    }
    sum += rec.delta;
    sum2 += rec.delta * rec.delta;
    ++n;
  }
  if (n > 0) {
    stats.mean_delta = sum / n;
    stats.std_delta = std::sqrt(std::max(0.0, sum2 / n - stats.mean_delta * stats.mean_delta));
  }
  return stats;
}

namespace {

void check_perturbation(int N, int m, std::span<const double> delta) {
  if (m < 1) throw DomainError("protection_check: power must be >= 1");
  if (static_cast<int>(delta.size()) != N) throw DomainError("protection_check: need one Delta per atom");
}

}  // namespace

ProtectionElements protection_check(int N, int n_modes, double g, int m, std::span<const double> delta) {
  check_perturbation(N, m, delta);
  const auto alpha = asymptotics::coherent_amplitudes(N, n_modes, g);
  double a2 = 0.0;
  for (const auto& a : alpha) a2 += std::norm(a);

  ProtectionElements out;
  out.power = m;
  out.photon_overlap = std::exp(-2.0 * a2);

  // Pseudospin basis: bit j set means atom j in |->. sigma_z swaps |+> and |->.
  const std::size_t configs = std::size_t{1} << N;
  const std::size_t ends[2] = {0, configs - 1};
  for (int t = 0; t < 2; ++t) {
    std::vector<double> v(configs, 0.0);
    v[ends[t]] = 1.0;
    for (int p = 0; p < m; ++p) {
      std::vector<double> w(configs, 0.0);
      for (std::size_t c = 0; c < configs; ++c) {
        if (v[c] == 0.0) continue;
        for (int j = 0; j < N; ++j) w[c ^ (std::size_t{1} << j)] += 0.5 * delta[static_cast<std::size_t>(j)] * v[c];
      }
      v.swap(w);
    }
    for (int s = 0; s < 2; ++s) {
      out.element[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
          v[ends[s]] * (s == t ? 1.0 : out.photon_overlap);
    }
  }
  return out;
}

ProtectionElements protection_check_full(const manybody::ManyBodySpec& spec, int m,
                                         std::span<const double> delta) {
  check_perturbation(spec.n_atoms(), m, delta);
  const Wavefunction G[2] = {asymptotics::asymptotic_vacuum(spec, 1), asymptotics::asymptotic_vacuum(spec, -1)};
  ProtectionElements out;
  out.power = m;
  out.photon_overlap = 0.0;
  for (int t = 0; t < 2; ++t) {
    Wavefunction v = G[t];
    for (int p = 0; p < m; ++p) v = manybody::apply_site_perturbation(delta, v);
    for (int s = 0; s < 2; ++s) {
      out.element[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = inner_product(G[s], v);
    }
  }
  // Photon factor: prod_j sigma_z,j turns the - spins into + spins and leaves
  // the photons alone.
  Wavefunction flipped = G[1];
  for (int j = 0; j < spec.n_atoms(); ++j) {
    std::vector<double> e(static_cast<std::size_t>(spec.n_atoms()), 0.0);
    e[static_cast<std::size_t>(j)] = 2.0;
    flipped = manybody::apply_site_perturbation(e, flipped);
  }
  out.photon_overlap = inner_product(G[0], flipped).real();
  return out;
}

}  // namespace cqedvac::disorder
