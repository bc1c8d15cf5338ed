#include "cqedvac/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "cqedvac/error.hpp"

namespace cqedvac {

BetaFit fit_beta(const std::vector<manybody::SplittingRecord>& records) {
  BetaFit fit;
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : records) {
    if (!r.converged) {
      fit.warnings.push_back(fmt::format("g={:.6g}: not converged, excluded", r.g));
      continue;
    }
    if (r.below_floor || !(r.delta_over_omega_F > 0.0)) {
      fit.warnings.push_back(fmt::format("g={:.6g}: below numerical floor, excluded", r.g));
      continue;
    }
    if (fit.N == 0) fit.N = r.N;
    if (r.N != fit.N) throw DomainError("fit_beta: records mix different N");
    const double g2 = r.g * r.g;
    if (std::find(x.begin(), x.end(), g2) != x.end()) {
      throw DomainError(fmt::format("fit_beta: duplicate g={:.6g}", r.g));
    }
    x.push_back(g2);
    y.push_back(std::log(r.delta_over_omega_F));
  }
  fit.points = static_cast<int>(x.size());
  if (fit.points < 4) {
    throw DomainError(fmt::format("fit_beta: need >= 4 usable records, have {}", fit.points));
  }
  fit.g2_min = *std::min_element(x.begin(), x.end());
  fit.g2_max = *std::max_element(x.begin(), x.end());
  if (!(fit.g2_max >= 2.0 * fit.g2_min)) {
    throw DomainError("fit_beta: g^2 range must span a factor >= 2");
  }

  const double n = fit.points;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    mx += x[static_cast<std::size_t>(i)];
    my += y[static_cast<std::size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    const double dx = x[static_cast<std::size_t>(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (y[static_cast<std::size_t>(i)] - my);
  }
  const double slope = sxy / sxx;
  fit.beta = -slope;
  fit.intercept = my - slope * mx;
  double ss = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    const double res = y[static_cast<std::size_t>(i)] - (fit.intercept + slope * x[static_cast<std::size_t>(i)]);
    ss += res * res;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace cqedvac
