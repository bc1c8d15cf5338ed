#pragma once

// Site-dependent atomic-frequency disorder, omega_F,j = omega_F,j (1 + a xi_j)
// with standard normal xi_j, and the perturbation
//   H_pert = sum_j (Delta_j / 2) sigma_z,j.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cqedvac/manybody.hpp"

namespace cqedvac::disorder {

struct DisorderEnsembleSpec {
  manybody::ManyBodySpec base;
  double amplitude = 0.5;
  int count = 100;
  std::uint64_t seed = 1;
};

void validate(const DisorderEnsembleSpec& spec);

/// Seed of realization r: splitmix64(seed + r). Realizations never share
/// generator state.
std::uint64_t realization_seed(std::uint64_t seed, int r);

/// Standard normal draws from mt19937_64 via Box-Muller on 53-bit uniforms;
/// identical on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// One omega_F list per realization.
std::vector<std::vector<double>> sample_frequencies(const DisorderEnsembleSpec& spec);

enum class Engine { exact, analytic };
std::string to_string(Engine e);
Engine parse_engine(const std::string& text);

inline constexpr std::size_t default_dimension_budget = 2'000'000;

struct RealizationRecord {
  int realization = 0;
  std::uint64_t seed = 0;
  std::vector<double> omega_F;
  double delta = 0.0;
  bool ok = true;
  std::string error;
};

struct EnsembleStats {
  double mean_delta = 0.0;
  double std_delta = 0.0;  // population: sqrt(<d^2> - <d>^2)
  std::vector<RealizationRecord> records;
  std::uint64_t seed = 0;
  Engine engine = Engine::exact;  // engine actually used
  bool engine_fallback = false;   // exact requested but over budget
  int failures = 0;
};

struct EnsembleOptions {
  int jobs = 1;
  std::size_t dimension_budget = default_dimension_budget;
  manybody::SpectrumOptions spectrum;
};

/// Mean and spread of the splitting across realizations. The analytic engine
/// needs a uniform chain (g and omega_1 are read from the base spec). Failed
/// exact realizations are kept with ok = false and excluded from the moments.
EnsembleStats ensemble_splitting(const DisorderEnsembleSpec& spec, Engine engine,
                                 const EnsembleOptions& opts = {});

struct ProtectionElements {
  /// [s][s'] = <G_s | H_pert^m | G_s'>, index 0 for +, 1 for -.
  std::array<std::array<cplx, 2>, 2> element{};
  int power = 0;
  double photon_overlap = 0.0;  // <G_+ photons | G_- photons>
};

/// Elements on the ideal (untruncated) vacua: H_pert flips pseudospins, so
/// the spin factor is evaluated exactly in the sigma_x basis and the photon
/// factor is the closed-form coherent-state overlap.
ProtectionElements protection_check(int N, int n_modes, double g, int m,
                                    std::span<const double> delta);

/// Same elements by repeated H_pert matvecs on the truncated vacua of spec.
/// Throws CutoffError from asymptotic_vacuum.
ProtectionElements protection_check_full(const manybody::ManyBodySpec& spec, int m,
                                         std::span<const double> delta);

}  // namespace cqedvac::disorder
