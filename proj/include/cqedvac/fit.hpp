#pragma once

// Least-squares fit of log(delta / omega_F) = intercept - beta g^2.

#include <string>
#include <vector>

#include "cqedvac/manybody.hpp"

namespace cqedvac {

struct BetaFit {
  int N = 0;
  double beta = 0.0;
  double intercept = 0.0;
  double g2_min = 0.0;
  double g2_max = 0.0;
  double residual_rms = 0.0;
  int points = 0;
  std::vector<std::string> warnings;  // one per excluded record
};

/// Uses converged records above the numerical floor only. Needs at least 4
/// such records at distinct g with g^2 spanning a factor >= 2; throws
/// DomainError otherwise.
BetaFit fit_beta(const std::vector<manybody::SplittingRecord>& records);

}  // namespace cqedvac
