#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "cqedvac/eigensolver.hpp"
#include "cqedvac/error.hpp"

using namespace cqedvac;
using Mat = Eigen::MatrixXcd;

namespace {

Mat random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = {g(rng), g(rng)};
  }
  return (A + A.adjoint()) / 2.0;
}

LinearOperator as_op(const Mat& A) {
  return [&A](std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    Eigen::Map<const Eigen::VectorXcd> x(in.data(), static_cast<Eigen::Index>(in.size()));
    Eigen::Map<Eigen::VectorXcd> y(out.data(), static_cast<Eigen::Index>(out.size()));
    y = A * x;
  };
}

}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("thick-restart lanczos matches the dense spectrum") {
  const Mat A = random_hermitian(400, 3);
  const auto exact = Eigen::SelfAdjointEigenSolver<Mat>(A).eigenvalues();
  std::vector<std::complex<double>> start(400, 1.0);
  LanczosOptions o;
  o.count = 4;
  o.tolerance = 1e-10;
  o.basis_size = 30;  // forces restarts
  const auto r = lanczos_lowest(as_op(A), 400, start, o);
  CHECK(r.restarts > 0);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(r.values[i] - exact(i)) < 1e-9);
    CHECK(r.residuals[i] <= 1e-10);
    Eigen::Map<const Eigen::VectorXcd> v(r.vectors[i].data(), 400);
    CHECK((A * v - r.values[i] * v).norm() <= 1.1e-10);
    CHECK(v.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("small invariant subspace from the start vector") {
  // diagonal operator with a start vector inside a 2-dimensional subspace
  Mat A = Mat::Zero(50, 50);
  for (int i = 0; i < 50; ++i) A(i, i) = i;
  std::vector<std::complex<double>> start(50, 0.0);
  start[10] = start[20] = 1.0;
  LanczosOptions o;
  o.count = 3;
  const auto r = lanczos_lowest(as_op(A), 50, start, o);
  CHECK(r.values[0] == doctest::Approx(0.0));
  CHECK(r.values[1] == doctest::Approx(1.0));
  CHECK(r.values[2] == doctest::Approx(2.0));
}

TEST_CASE("dense path and failures") {
  const Mat A = random_hermitian(40, 5);
  const auto exact = Eigen::SelfAdjointEigenSolver<Mat>(A).eigenvalues();
  const auto d = dense_lowest(as_op(A), 40, 3);
  for (int i = 0; i < 3; ++i) CHECK(d.values[i] == doctest::Approx(exact(i)).epsilon(1e-12));

  const Mat B = random_hermitian(300, 9);
  std::vector<std::complex<double>> start(300, 1.0);
  LanczosOptions o;
  o.count = 2;
  o.tolerance = 1e-10;
  o.max_matvecs = 15;
  try {
    lanczos_lowest(as_op(B), 300, start, o);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residuals().size() == 2);
  }
  std::vector<std::complex<double>> zero(300, 0.0);
  CHECK_THROWS_AS(lanczos_lowest(as_op(B), 300, zero, LanczosOptions{}), DomainError);
}

}
