// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "cqedvac/asymptotics.hpp"
#include "cqedvac/circuit.hpp"
#include "cqedvac/disorder.hpp"
#include "cqedvac/error.hpp"
#include "cqedvac/fluxonium.hpp"
#include "cqedvac/hopfield.hpp"
#include "cqedvac/manybody.hpp"

using namespace cqedvac;
namespace fs = std::filesystem;
namespace mb = cqedvac::manybody;
namespace as = cqedvac::asymptotics;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> body;
};

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

mb::SplittingRecord default_splitting(int N, int n_modes, double g) {
  const auto schedule = mb::default_cutoff_schedule(N, n_modes, g);
  return mb::converged_splitting(mb::chain_spec(N, n_modes, g, 1.0, 1.0, schedule.back()), schedule);
}

// --- 1 ---------------------------------------------------------------------

Outcome critical_coupling() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  double worst_boundary = 0.0, worst_det = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double wk = u(rng), wf = u(rng);
    double lo = 0.0, hi = 10.0;  // stable at lo, unstable at hi
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (hopfield::polariton_frequencies({wk, wf, mid}).stable ? lo : hi) = mid;
    }
    worst_boundary = std::max(worst_boundary, std::abs(0.5 * (lo + hi) - std::sqrt(wk * wf) / 2.0));
    const hopfield::HopfieldBlock b{wk, wf, u(rng) * std::sqrt(wk * wf) / 5.0};
    const double lu = hopfield::build_matrix(b).determinant().real();
    worst_det = std::max(worst_det, std::abs(hopfield::determinant(b) - lu) / std::abs(lu));
  }
  return {worst_boundary < 1e-8 && worst_det < 1e-9,
          fmt::format("max |Omega_c - sqrt(wk wF)/2| = {:.2e}, max det rel err = {:.2e}", worst_boundary,
                      worst_det)};
}

// --- 2 ---------------------------------------------------------------------

Outcome fluxonium_limits() {
  fluxonium::FluxoniumSpec s;
  s.E_J = 3.0;
  s.E_CJ = 1.0;
  s.E_LJ = 3.0 / 20.0;
  const auto red = fluxonium::two_level_reduction(fluxonium::solve_levels(s, 3));
  const bool inset = std::abs(red.phi01 - M_PI) < 0.1 * M_PI && !red.weakly_anharmonic;

  fluxonium::FluxoniumSpec h;
  h.E_J = 0.0;
  h.E_CJ = 1.0;
  h.E_LJ = 3.0 / 20.0;
  const auto lv = fluxonium::solve_levels(h, 3);
  const double w = std::sqrt(8.0 * h.E_CJ * h.E_LJ);
  const double p = std::pow(2.0 * h.E_CJ / h.E_LJ, 0.25);
  const double ew = std::abs(lv.omega_F / w - 1.0), ep = std::abs(lv.phi01 / p - 1.0);
  return {inset && ew < 1e-6 && ep < 1e-6,
          fmt::format("phi01 = {:.4f} (pi = {:.4f}), anharmonicity = {:.3f}, oscillator rel err wF {:.1e} "
                      "phi01 {:.1e}",
                      red.phi01, M_PI, red.anharmonicity, ew, ep)};
}

// --- 3 ---------------------------------------------------------------------

Outcome coupling_estimate() {
  const double c = circuit::coupling_estimate(1.0, 1, 1.0, 0.25);
  return {c >= 5.6 && c <= 5.8, fmt::format("coupling_estimate(1, 1, 1, 0.25) = {:.4f}", c)};
}

// --- 4 ---------------------------------------------------------------------

mb::ManyBodySpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pickN(2, 3), pickM(1, 3), pickC(2, 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    mb::ManyBodySpec s;
    const int N = pickN(rng), M = pickM(rng);
    std::size_t dim = std::size_t{1} << N;
    for (int j = 0; j < N; ++j) s.omega_F.push_back(0.5 + u(rng));
    for (int k = 0; k < M; ++k) {
      s.omega_mode.push_back(0.5 + 1.5 * u(rng));
      s.rabi.push_back(1.5 * u(rng));
      s.cutoffs.push_back(pickC(rng));
      dim *= static_cast<std::size_t>(s.cutoffs.back() + 1);
      std::vector<double> w;
      for (int j = 0; j < N; ++j) w.push_back(2.0 * u(rng) - 1.0);
      s.weights.push_back(w);
    }
    if (dim >= 64 && dim <= 1200) return s;
  }
}

Outcome dense_equivalence() {
  std::mt19937_64 rng(4);
  double worst_iter = 0.0, worst_union = 0.0;
  std::string dims;
  for (int t = 0; t < 6; ++t) {
    const auto s = random_spec(rng);
    std::vector<double> merged;
    for (Sector sec : {Sector::even, Sector::odd}) {
      mb::SpectrumOptions it;
      it.tolerance = 1e-10;
      it.method = mb::SolverMethod::iterative;
      mb::SpectrumOptions de;
      de.method = mb::SolverMethod::dense;
      const auto a = mb::lowest_spectrum(s, sec, 4, it);
      const auto b = mb::lowest_spectrum(s, sec, 4, de);
      for (int i = 0; i < 4; ++i) worst_iter = std::max(worst_iter, std::abs(a.eigenvalues[i] - b.eigenvalues[i]));
      const mb::HamiltonianOperator op(s, mb::make_indexer(s, sec));
      const auto all = dense_lowest(op.as_operator(), op.dimension(), static_cast<int>(op.dimension()));
      merged.insert(merged.end(), all.values.begin(), all.values.end());
    }
    std::sort(merged.begin(), merged.end());
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<oracle::Mat>(oracle::dense_hamiltonian(s)).eigenvalues();
    if (static_cast<Eigen::Index>(merged.size()) != ref.size()) return {false, "sector dimensions do not add up"};
    for (Eigen::Index i = 0; i < ref.size(); ++i) {
      worst_union = std::max(worst_union, std::abs(merged[static_cast<std::size_t>(i)] - ref(i)));
    }
    dims += fmt::format("{}{}", dims.empty() ? "" : ",", ref.size());
  }
  return {worst_iter < 1e-9 && worst_union < 1e-9,
          fmt::format("6 specs (dim {}), iterative vs dense {:.1e}, sector union vs full {:.1e}", dims, worst_iter,
                      worst_union)};
}

// --- 5 ---------------------------------------------------------------------

Outcome n2_splitting() {
  bool ok = true;
  std::string d;
  for (double g : {0.8, 1.0, 1.2, 1.5}) {
    const auto r = default_splitting(2, 1, g);
    const double f = as::analytic_splitting_N2(1.0, 1.0, g);
    const double rel = r.delta / f - 1.0;
    ok = ok && r.converged && std::abs(rel) < 0.1;
    d += fmt::format("g={} delta={:.3e} formula={:.3e} ({:+.1f}%{}); ", g, r.delta, f, 100 * rel,
                     r.converged ? "" : ", unconverged");
  }
  return {ok, d};
}

// --- 6 ---------------------------------------------------------------------

Outcome beta_scaling() {
  struct Case {
    int N, M;
    std::vector<double> g2;
  };
  const std::vector<Case> cases = {{2, 1, {1.5, 2.0, 2.5, 3.0}}, {3, 3, {0.6, 0.8, 1.0, 1.2, 1.4}}};
  bool ok = as::beta_exponent(2, 2) == 8.0;
  std::string d = fmt::format("beta_exponent(2,2) = {:.17g}; ", as::beta_exponent(2, 2));
  for (const auto& c : cases) {
    std::vector<double> x, y;
    bool conv = true;
    for (double g2 : c.g2) {
      const auto r = default_splitting(c.N, c.M, std::sqrt(g2));
      conv = conv && r.converged && !r.below_floor;
      x.push_back(g2);
      y.push_back(std::log(r.delta_over_omega_F));
    }
    const double beta = -slope(x, y);
    const double n2 = c.N * c.N;
    ok = ok && conv && beta > 1.6 * n2 && beta < 2.1 * n2;
    d += fmt::format("N={} N_m={} beta={:.3f} in ({:.1f}, {:.1f}){}; ", c.N, c.M, beta, 1.6 * n2, 2.1 * n2,
                     conv ? "" : " [unconverged point]");
  }
  return {ok, d};
}

// --- 7 ---------------------------------------------------------------------

Outcome vacuum_overlap() {
  std::vector<double> grid;
  for (int i = 1; i <= 6; ++i) grid.push_back(0.25 * i);
  std::vector<double> fid;
  std::vector<bool> conv;
  std::string d;
  for (double g : grid) {
    const auto coarse = mb::ground_doublet(mb::chain_spec(5, 3, g, 1.0, 1.0, mb::choose_cutoffs(5, 3, g, 4, 6)));
    const auto fs_ = mb::chain_spec(5, 3, g, 1.0, 1.0, mb::choose_cutoffs(5, 3, g, 5, 8));
    const auto fine = mb::ground_doublet(fs_);
    conv.push_back(mb::refinement_agrees(coarse.record, fine.record));
    const auto ov = as::subspace_overlap(fine.even_state, fine.odd_state, as::asymptotic_vacuum(fs_, 1),
                                         as::asymptotic_vacuum(fs_, -1));
    fid.push_back(ov.fidelity);
    d += fmt::format("g={}:{:.5f}{} ", g, ov.fidelity, conv.back() ? "" : "(unconv)");
  }
  int top = -1;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    if (conv[static_cast<std::size_t>(i)]) top = i;
  }
  if (top < 0) return {false, d + "no converged g"};
  bool mono = true;
  for (std::size_t i = grid.size() / 2 + 1; i < grid.size(); ++i) mono = mono && fid[i] >= fid[i - 1];
  const double f = fid[static_cast<std::size_t>(top)];
  return {f >= 0.98 && mono,
          d + fmt::format("| largest converged g={} fidelity={:.5f}, top half monotone: {}", grid[top], f,
                          mono ? "yes" : "no")};
}

// --- 8 ---------------------------------------------------------------------

Outcome ferromagnetic_minimizer() {
  bool ok = true;
  std::string d;
  for (int N = 2; N <= 8; ++N) {
    const int M = N == 2 ? 1 : N;
    const auto r = as::minimize_pseudospin_config(N, M);
    const std::vector<int> up(static_cast<std::size_t>(N), 1), down(static_cast<std::size_t>(N), -1);
    const bool good = r.minimizers.size() == 2 &&
                      std::find(r.minimizers.begin(), r.minimizers.end(), up) != r.minimizers.end() &&
                      std::find(r.minimizers.begin(), r.minimizers.end(), down) != r.minimizers.end();
    ok = ok && good;
    d += fmt::format("N={}:{} ", N, good ? "ferro" : fmt::format("{} minima", r.minimizers.size()));
  }
  return {ok, d};
}

// --- 9 ---------------------------------------------------------------------

Outcome protection() {
  bool ok = true;
  std::string d;
  for (int N = 2; N <= 4; ++N) {
    const int M = N == 2 ? 1 : N;
    disorder::NormalStream xi(disorder::realization_seed(9, N));
    std::vector<double> delta;
    for (int j = 0; j < N; ++j) delta.push_back(0.5 * xi.next());
    double low_diag = 0.0, low_cross = 0.0;
    for (int m = 1; m < N; ++m) {
      const auto e = disorder::protection_check(N, M, 1.5, m, delta);
      low_diag = std::max({low_diag, std::abs(e.element[0][0]), std::abs(e.element[1][1])});
      low_cross = std::max({low_cross, std::abs(e.element[0][1]), std::abs(e.element[1][0])});
    }
    const auto top = disorder::protection_check(N, M, 1.5, N, delta);
    const double cross_N = std::abs(top.element[0][1]);
    ok = ok && low_diag < 1e-12 && low_cross < 1e-12 && cross_N > 0.0;
    d += fmt::format("N={}: m<N max diag {:.2e} max cross {:.2e}, m=N cross {:.2e}; ", N, low_diag, low_cross,
                     cross_N);
  }
  return {ok, d};
}

// --- 10 --------------------------------------------------------------------

Outcome disorder_statistics() {
  disorder::DisorderEnsembleSpec a;
  a.base = mb::chain_spec(2, 1, 1.2, 1.0, 1.0, {4});
  a.amplitude = 0.5;
  a.count = 10000;
  a.seed = 10;
  const auto st = disorder::ensemble_splitting(a, disorder::Engine::analytic);
  const double ratio = st.std_delta / st.mean_delta;
  const double expect = std::sqrt(2.0 + 0.25) * 0.5;
  const bool stat_ok = std::abs(ratio / expect - 1.0) < 0.05;

  std::vector<double> x, y_dis, y_clean;
  int failures = 0;
  for (double g : {1.0, 1.2, 1.4, 1.6}) {
    const auto cut = mb::default_cutoff_schedule(2, 1, g).back();
    disorder::DisorderEnsembleSpec e;
    e.base = mb::chain_spec(2, 1, g, 1.0, 1.0, cut);
    e.amplitude = 0.5;
    e.count = 100;
    e.seed = 20;
    const auto es = disorder::ensemble_splitting(e, disorder::Engine::exact);
    failures += es.failures;
    x.push_back(g * g);
    y_dis.push_back(std::log(es.mean_delta));
    y_clean.push_back(std::log(mb::ground_splitting(e.base).delta));
  }
  const double s_dis = slope(x, y_dis), s_clean = slope(x, y_clean);
  const bool slope_ok = failures == 0 && std::abs(s_dis / s_clean - 1.0) < 0.05;
  return {stat_ok && slope_ok,
          fmt::format("analytic sigma/<delta> = {:.4f} vs {:.4f}; exact slope {:.3f} vs clean {:.3f} ({:+.1f}%), "
                      "{} failed realizations",
                      ratio, expect, s_dis, s_clean, 100 * (s_dis / s_clean - 1.0), failures)};
}

// --- 11 --------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"derive", "--set L1=2e-9 --set L2=1e-9 --set l_r=4e-7 --set c_r=1.6e-10 --set a=1e-4 --set N=4 "
                 "--set E_J=5 --set E_CJ=1.6"},
      {"fluxonium", "--set E_J=3 --set E_CJ=1 --set E_LJ=0.15"},
      {"polariton", "--set Omega=0:1:21"},
      {"spectrum", "--set N=2 --set N_m=2 --set g=0.5"},
      {"splitting-sweep", "--set N=2 --set N_m=1 --set g=0.6,0.8"},
      {"overlap", "--set N=2 --set N_m=1 --set g=1.0"},
      {"disorder", "--set N=2 --set N_m=1 --set g=0.8 --set count=8 --seed 5 --jobs 2"},
      {"fit-beta", "--set N=2 --set N_m=1 --set g=1.2,1.4,1.6,1.8"},
  };
  const fs::path root = fs::path(CQEDVAC_TEST_TMP) / "determinism";
  fs::remove_all(root);
  std::string d;
  bool ok = true;
  for (const auto& [cmd, args] : runs) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = root / fmt::format("{}-{}", cmd, rep);
      const auto line = fmt::format("\"{}\" {} {} --out \"{}\" 2>/dev/null", CQEDVAC_CLI_PATH, cmd, args, dir.string());
      if (std::system(line.c_str()) != 0) {
        ok = false;
        d += cmd + ": nonzero exit; ";
      }
      dirs.push_back(dir);
    }
    int files = 0;
    bool same = fs::exists(dirs[0]);
    if (same) {
      for (const auto& e : fs::directory_iterator(dirs[0])) {
        ++files;
        const auto other = dirs[1] / e.path().filename();
        same = same && fs::exists(other) && slurp(e.path()) == slurp(other);
      }
    }
    ok = ok && same && files > 0;
    d += fmt::format("{}:{}({} files) ", cmd, same ? "identical" : "DIFFER", files);
  }
  return {ok, d};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "critical coupling", 1, critical_coupling},
      {2, "fluxonium reduction", 5, fluxonium_limits},
      {3, "coupling estimate", 1, coupling_estimate},
      {4, "dense-oracle equivalence", 60, dense_equivalence},
      {5, "N=2 splitting vs closed form", 120, n2_splitting},
      {6, "beta scaling", 900, beta_scaling},
      {7, "vacuum overlap N=5", 1800, vacuum_overlap},
      {8, "ferromagnetic minimizer", 1, ferromagnetic_minimizer},
      {9, "protection", 120, protection},
      {10, "disorder statistics", 600, disorder_statistics},
      {11, "determinism", 60, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    fmt::print("{} {:>2} {}: {} [{:.1f} s{}]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs,
               in_time ? "" : fmt::format(" > budget {:.0f} s", c.budget_s));
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
