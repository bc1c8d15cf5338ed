#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cqedvac/hopfield.hpp"

using namespace cqedvac::hopfield;

TEST_SUITE("hopfield") {

TEST_CASE("pseudo-hermitian structure") {
  const HopfieldBlock b{1.3, 0.8, 0.4};
  const Matrix4c M = build_matrix(b);
  const Matrix4c eta = metric();
  CHECK((M.adjoint() - eta * M * eta).norm() < 1e-14);
  const Matrix4c K = eta * M;
  CHECK((K - K.adjoint()).norm() < 1e-14);
}

TEST_CASE("closed-form determinant against LU") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int t = 0; t < 50; ++t) {
    const HopfieldBlock b{u(rng), u(rng), u(rng)};
    const double lu = build_matrix(b).determinant().real();
    CHECK(determinant(b) == doctest::Approx(lu).epsilon(1e-9));
    CHECK(determinant(b) == doctest::Approx(b.omega_k * b.omega_F * (b.omega_k * b.omega_F - 4 * b.Omega_k * b.Omega_k)));
  }
}

TEST_CASE("frequencies match a general eigensolve") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int t = 0; t < 50; ++t) {
    HopfieldBlock b{u(rng), u(rng), 0.0};
    b.Omega_k = critical_coupling(b.omega_k, b.omega_F) * u(rng) / 3.0 * 1.5;
    Eigen::ComplexEigenSolver<Matrix4c> es(build_matrix(b));
    std::vector<double> re, im;
    for (int i = 0; i < 4; ++i) {
      re.push_back(std::abs(es.eigenvalues()(i).real()));
      im.push_back(std::abs(es.eigenvalues()(i).imag()));
    }
    const auto r = polariton_frequencies(b);
    if (r.stable) {
      std::sort(re.begin(), re.end());
      CHECK(re[0] == doctest::Approx(r.lower).epsilon(1e-7));
      CHECK(re[3] == doctest::Approx(r.upper).epsilon(1e-9));
      CHECK(*std::max_element(im.begin(), im.end()) < 1e-7);
    } else {
      CHECK(*std::max_element(im.begin(), im.end()) == doctest::Approx(r.imaginary).epsilon(1e-7));
    }
  }
}

TEST_CASE("uncoupled block") {
  const auto r = polariton_frequencies({1.0, 2.5, 0.0});
  CHECK(r.lower == doctest::Approx(1.0));
  CHECK(r.upper == doctest::Approx(2.5));
  CHECK(r.stable);
}

TEST_CASE("critical coupling and lower branch") {
  CHECK(critical_coupling(1.0, 1.0) == 0.5);
  CHECK(critical_coupling(4.0, 1.0) == 1.0);
  const HopfieldBlock at{2.0, 0.5, critical_coupling(2.0, 0.5)};
  CHECK(polariton_frequencies(at).lower < 1e-6);
  CHECK(std::abs(determinant(at)) < 1e-14);
  HopfieldBlock above = at;
  above.Omega_k *= 1.01;
  CHECK_FALSE(polariton_frequencies(above).stable);
  // lower branch follows sqrt(Omega_c^2 - Omega^2) near the boundary
  HopfieldBlock near = at;
  near.Omega_k = at.Omega_k * (1 - 1e-10);
  const double l = polariton_frequencies(near).lower;
  CHECK(l > 0.0);
  CHECK(std::isfinite(l));
}

TEST_CASE("branch sweep") {
  const std::vector<double> grid = {0.0, 0.1, 0.2, 0.6};
  const auto rows = branch_sweep({1.0, 1.0, 0.0}, grid);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].result.lower == doctest::Approx(1.0));
  CHECK(rows[1].result.lower < rows[0].result.lower);
  CHECK_FALSE(rows[3].result.stable);
  CHECK(branch_sweep({1.0, 1.0, 0.0}, std::vector<double>{}).empty());
  const std::vector<double> bad = {0.2, 0.1};
  CHECK_THROWS(branch_sweep({1.0, 1.0, 0.0}, bad));
}

}
