#include <doctest.h>

#include <cmath>

#include "cqedvac/asymptotics.hpp"
#include "cqedvac/disorder.hpp"
#include "cqedvac/error.hpp"

using namespace cqedvac;
using namespace cqedvac::disorder;

namespace {

DisorderEnsembleSpec ensemble(int N, int n_modes, double g, double amplitude, int count) {
  DisorderEnsembleSpec s;
  s.base = manybody::chain_spec(N, n_modes, g, 1.0, 1.0, manybody::choose_cutoffs(N, n_modes, g, 3.0));
  s.amplitude = amplitude;
  s.count = count;
  s.seed = 42;
  return s;
}

}  // namespace

TEST_SUITE("disorder") {

TEST_CASE("sampling") {
  SUBCASE("zero amplitude leaves the frequencies alone") {
    for (const auto& w : sample_frequencies(ensemble(3, 1, 0.5, 0.0, 20))) {
      for (double x : w) CHECK(x == 1.0);
    }
  }
  SUBCASE("same seed, same draws; different seed, different draws") {
    auto s = ensemble(3, 1, 0.5, 0.5, 30);
    const auto a = sample_frequencies(s);
    CHECK(a == sample_frequencies(s));
    s.seed = 43;
    CHECK(a != sample_frequencies(s));
  }
  SUBCASE("sample mean within three standard errors") {
    auto s = ensemble(2, 1, 0.5, 0.5, 5000);
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    for (const auto& w : sample_frequencies(s)) {
      for (double x : w) {
        sum += x;
        sum2 += x * x;
        ++n;
      }
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(var / n));
    CHECK(var == doctest::Approx(0.25).epsilon(0.05));
  }
  SUBCASE("normal stream is pinned") {
    NormalStream a(7), b(7);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  }
  CHECK_THROWS_AS(sample_frequencies(ensemble(2, 1, 0.5, -0.1, 2)), DomainError);
  CHECK_THROWS_AS(sample_frequencies(ensemble(2, 1, 0.5, 0.1, 0)), DomainError);
}

TEST_CASE("ensemble statistics") {
  SUBCASE("clean limit") {
    const auto s = ensemble(2, 1, 0.8, 0.0, 4);
    const auto st = ensemble_splitting(s, Engine::exact);
    const auto clean = manybody::ground_splitting(s.base).delta;
    CHECK(st.std_delta == 0.0);
    CHECK(st.mean_delta == doctest::Approx(clean).epsilon(1e-12));
  }
  SUBCASE("analytic N = 2 spread") {
    const auto st = ensemble_splitting(ensemble(2, 1, 1.0, 0.2, 20000), Engine::analytic);
    CHECK(st.engine == Engine::analytic);
    CHECK(st.std_delta / st.mean_delta == doctest::Approx(std::sqrt(2.04) * 0.2).epsilon(0.03));
  }
  SUBCASE("analytic general N spread for weak disorder") {
    const auto st = ensemble_splitting(ensemble(4, 2, 0.5, 0.05, 20000), Engine::analytic);
    CHECK(st.std_delta / st.mean_delta == doctest::Approx(2.0 * 0.05).epsilon(0.05));
  }
  SUBCASE("exact engine over budget falls back") {
    EnsembleOptions o;
    o.dimension_budget = 10;
    const auto st = ensemble_splitting(ensemble(2, 1, 0.8, 0.3, 3), Engine::exact, o);
    CHECK(st.engine_fallback);
    CHECK(st.engine == Engine::analytic);
  }
  SUBCASE("parallel jobs do not change results") {
    const auto s = ensemble(2, 1, 0.9, 0.5, 12);
    EnsembleOptions one, four;
    four.jobs = 4;
    const auto a = ensemble_splitting(s, Engine::exact, one);
    const auto b = ensemble_splitting(s, Engine::exact, four);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].delta == b.records[i].delta);
    CHECK(a.mean_delta == b.mean_delta);
  }
}

TEST_CASE("protection") {
  const std::vector<double> delta3 = {0.31, -0.57, 0.22};
  SUBCASE("no perturbation, no elements") {
    const std::vector<double> zero(3, 0.0);
    for (int m = 1; m <= 4; ++m) {
      const auto r = protection_check(3, 3, 1.5, m, zero);
      for (const auto& row : r.element) {
        for (auto x : row) CHECK(std::abs(x) == 0.0);
      }
    }
  }
  SUBCASE("cross elements vanish below order N") {
    for (int m : {1, 2}) {
      const auto r = protection_check(3, 3, 1.5, m, delta3);
      CHECK(std::abs(r.element[0][1]) < 1e-12);
      CHECK(std::abs(r.element[1][0]) < 1e-12);
    }
    const auto r = protection_check(3, 3, 1.5, 3, delta3);
    // 3! prod(Delta_j / 2) times the photon overlap
    const double spin = 6.0 * (0.31 / 2) * (-0.57 / 2) * (0.22 / 2);
    CHECK(r.element[0][1].real() == doctest::Approx(spin * r.photon_overlap));
    CHECK(std::abs(r.element[0][1]) > 0.0);
  }
  SUBCASE("odd powers have no diagonal part, even powers do") {
    const auto r1 = protection_check(3, 3, 1.5, 1, delta3);
    CHECK(std::abs(r1.element[0][0]) == 0.0);
    const auto r2 = protection_check(3, 3, 1.5, 2, delta3);
    double sum = 0.0;
    for (double d : delta3) sum += d * d / 4;
    CHECK(r2.element[0][0].real() == doctest::Approx(sum));
    CHECK(r2.element[1][1].real() == doctest::Approx(sum));
  }
  SUBCASE("N = 2 cross element at m = 2") {
    const std::vector<double> d = {0.4, -0.3};
    const auto r = protection_check(2, 1, 0.8, 2, d);
    CHECK(r.element[0][1].real() == doctest::Approx(2 * 0.2 * -0.15 * std::exp(-2 * 4 * 0.64)));
  }
  SUBCASE("factorized elements agree with matvecs on the truncated vacua") {
    const std::vector<double> d = {0.4, -0.3};
    const double g = 0.6;
    const auto s = manybody::chain_spec(2, 1, g, 1.0, 1.0, {40});
    for (int m = 1; m <= 3; ++m) {
      const auto a = protection_check(2, 1, g, m, d);
      const auto b = protection_check_full(s, m, d);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) CHECK(std::abs(a.element[i][j] - b.element[i][j]) < 1e-10);
      }
      CHECK(b.photon_overlap == doctest::Approx(a.photon_overlap).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(protection_check(3, 3, 1.0, 0, delta3), DomainError);
  CHECK_THROWS_AS(protection_check(2, 1, 1.0, 1, delta3), DomainError);
  const auto small = manybody::chain_spec(3, 1, 1.5, 1.0, 1.0, {4});
  CHECK_THROWS_AS(protection_check_full(small, 1, delta3), CutoffError);
}

}
