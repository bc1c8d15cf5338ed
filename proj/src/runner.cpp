#include "cqedvac/runner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "cqedvac/asymptotics.hpp"
#include "cqedvac/circuit.hpp"
#include "cqedvac/disorder.hpp"
#include "cqedvac/error.hpp"
#include "cqedvac/fit.hpp"
#include "cqedvac/fluxonium.hpp"
#include "cqedvac/hopfield.hpp"
#include "cqedvac/manybody.hpp"
#include "cqedvac/parallel.hpp"

namespace cqedvac::runner {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// --- schemas --------------------------------------------------------------

using KeyList = std::vector<std::pair<std::string, std::string>>;

const KeyList& common_keys() {
  static const KeyList k = {{"seed", "1"}, {"jobs", "1"}, {"out", ""}};
  return k;
}

const KeyList chain_keys = {{"N", ""},       {"N_m", ""},      {"g", ""},
                            {"omega_F", "1"}, {"omega_1", "1"}, {"tolerance", "1e-9"}};

KeyList join(KeyList a, const KeyList& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::map<std::string, KeyList>& schemas() {
  static const std::map<std::string, KeyList> s = {
      {"derive",
       {{"L1", ""}, {"L2", ""}, {"l_r", ""}, {"c_r", ""}, {"a", ""}, {"N", ""}, {"E_J", ""}, {"E_CJ", ""},
        {"phi01", "auto"}, {"grid_points", "801"}}},
      {"fluxonium",
       {{"E_J", ""}, {"E_CJ", ""}, {"E_LJ", ""}, {"levels", "4"},
        {"grid_half_width", fmt::format("{:.17g}", 6.0 * std::numbers::pi)}, {"grid_points", "801"},
        {"tolerance", "1e-2"}}},
      {"polariton", {{"omega_k", "1"}, {"omega_F", "1"}, {"Omega", "0:1:101"}}},
      {"spectrum", join(chain_keys, {{"cutoffs", "auto"}, {"safety", "3"}, {"floor", "4"},
                                     {"sector", "full"}, {"count", "6"}})},
      {"splitting-sweep",
       join(chain_keys, {{"refine", "true"}, {"safety", "3"}, {"floor", "4"}, {"relative_delta", "1e-3"}})},
      {"overlap", join(chain_keys, {{"safety", "3"}, {"floor", "4"}})},
      {"disorder", join(chain_keys, {{"amplitude", "0.5"}, {"count", "100"}, {"engine", "exact"},
                                     {"dimension_budget", "2000000"}, {"safety", "3"}, {"floor", "4"}})},
      {"fit-beta", {{"input", ""}, {"N", ""}, {"N_m", ""}, {"g", ""}, {"omega_F", "1"}, {"omega_1", "1"},
                    {"tolerance", "1e-9"}, {"relative_delta", "1e-3"}}},
  };
  return s;
}

// Keys that must be given explicitly. fit-beta needs either input or the
// sweep keys; checked at run time.
const std::set<std::string> optional_empty = {"out", "input", "N", "N_m", "g"};

// --- typed access ---------------------------------------------------------

class Params {
 public:
  explicit Params(const ConfigMap& m) : m_(m) {}

  const ConfigEntry& entry(const std::string& key) const {
    const auto it = m_.find(key);
    if (it == m_.end()) throw ConfigError("missing key '" + key + "'", key, 0);
    return it->second;
  }
  const std::string& str(const std::string& key) const { return entry(key).value; }
  bool empty(const std::string& key) const { return str(key).empty(); }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const auto& e = entry(key);
    throw ConfigError(e.line > 0 ? fmt::format("line {}: key '{}': {}", e.line, key, why)
                                 : fmt::format("key '{}': {}", key, why),
                      key, e.line);
  }

  double number(const std::string& key) const { return parse_double(key, str(key)); }

  int integer(const std::string& key) const {
    const auto& s = str(key);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < INT32_MIN || v > INT32_MAX) {
      fail(key, "expected an integer, got '" + s + "'");
    }
    return static_cast<int>(v);
  }

  bool boolean(const std::string& key) const {
    const auto& s = str(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(key, "expected true or false, got '" + s + "'");
  }

  /// Comma-separated numbers; an item "start:stop:count" expands to an
  /// inclusive linear grid.
  std::vector<double> grid(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      if (item.find(':') == std::string::npos) {
        out.push_back(parse_double(key, item));
        continue;
      }
      std::stringstream parts(item);
      std::string a, b, c;
      if (!std::getline(parts, a, ':') || !std::getline(parts, b, ':') || !std::getline(parts, c, ':')) {
        fail(key, "range must read start:stop:count");
      }
      const double lo = parse_double(key, trim(a));
      const double hi = parse_double(key, trim(b));
      const double n = parse_double(key, trim(c));
      if (n < 1 || n != std::floor(n)) fail(key, "range count must be a positive integer");
      const int count = static_cast<int>(n);
      for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
    return out;
  }

  std::vector<int> int_list(const std::string& key) const {
    std::vector<int> out;
    for (double v : grid(key)) {
      if (v != std::floor(v)) fail(key, "expected integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

 private:
  double parse_double(const std::string& key, const std::string& s) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
      fail(key, "expected a number, got '" + s + "'");
    }
    return v;
  }

  const ConfigMap& m_;
};

// --- output helpers -------------------------------------------------------

std::string num(double x) { return fmt::format("{:.17g}", x); }

class Csv {
 public:
  Csv(const fs::path& path, const std::string& hash, const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "# config_hash=" << hash << '\n';
    row(columns);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct Context {
  const RunConfig& config;
  Params p;
  fs::path dir;
  std::string hash;
  std::ostream& log;
  std::vector<std::string> files;
  int status = 0;

  fs::path file(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
  void warn(const std::string& msg) { log << "warning: " << msg << '\n'; }
  void failed(const std::string& msg) {
    log << "error: " << msg << '\n';
    status = 1;
  }
};

// --- shared chain setup ----------------------------------------------------

struct ChainParams {
  int N = 0;
  int n_modes = 0;
  double omega_F = 1.0;
  double omega_1 = 1.0;
  manybody::SpectrumOptions spectrum;
};

ChainParams chain_params(const Params& p) {
  ChainParams c;
  c.N = p.integer("N");
  c.n_modes = p.integer("N_m");
  c.omega_F = p.number("omega_F");
  c.omega_1 = p.number("omega_1");
  c.spectrum.tolerance = p.number("tolerance");
  if (c.N < 2) p.fail("N", "need N >= 2");
  if (c.N > 16) p.fail("N", "need N <= 16");
  if (c.n_modes < 1 || c.n_modes > c.N) p.fail("N_m", "need 1 <= N_m <= N");
  if (!(c.omega_1 > 0.0)) p.fail("omega_1", "must be > 0");
  if (!(c.spectrum.tolerance > 0.0)) p.fail("tolerance", "must be > 0");
  return c;
}

std::vector<double> g_grid(const Params& p) {
  auto g = p.grid("g");
  for (double x : g) {
    if (x < 0.0) p.fail("g", "coupling values must be >= 0");
  }
  std::sort(g.begin(), g.end());
  return g;
}

std::vector<std::string> sweep_columns(int n_modes) {
  std::vector<std::string> c = {"N", "N_m", "g"};
  for (int k = 1; k <= n_modes; ++k) c.push_back(fmt::format("n_max_{}", k));
  for (const char* s : {"E_even", "E_odd", "delta", "delta_over_omegaF", "converged"}) c.emplace_back(s);
  return c;
}

std::vector<std::string> sweep_row(const manybody::SplittingRecord& r) {
  std::vector<std::string> row = {std::to_string(r.N), std::to_string(r.n_modes), num(r.g)};
  for (int c : r.cutoffs) row.push_back(std::to_string(c));
  row.push_back(num(r.E_even));
  row.push_back(num(r.E_odd));
  row.push_back(num(r.delta));
  row.push_back(num(r.delta_over_omega_F));
  row.push_back(bool_text(r.converged));
  return row;
}

// --- commands --------------------------------------------------------------

void cmd_derive(Context& ctx) {
  const auto& p = ctx.p;
  circuit::RawCircuit raw;
  raw.L1 = p.number("L1");
  raw.L2 = p.number("L2");
  raw.l_r = p.number("l_r");
  raw.c_r = p.number("c_r");
  raw.a = p.number("a");
  raw.N = p.integer("N");
  raw.E_J = p.number("E_J");
  raw.E_CJ = p.number("E_CJ");
  const auto c = circuit::derive_constants(raw);

  json j;
  j["config_hash"] = ctx.hash;
  j["E_Lr"] = c.E_Lr;
  j["E_LJ"] = c.E_LJ;
  j["G"] = c.G;
  j["E_Cr"] = c.E_Cr;
  j["l_r_renorm"] = c.l_r_renorm;
  j["chi"] = c.chi;

  double phi01 = 0.0;
  if (p.str("phi01") == "auto") {
    fluxonium::FluxoniumSpec fs;
    fs.E_J = units::ghz_to_angular_ghz(raw.E_J);
    fs.E_CJ = units::ghz_to_angular_ghz(raw.E_CJ);
    fs.E_LJ = c.E_LJ;
    fs.grid_points = p.integer("grid_points");
    const auto levels = fluxonium::solve_levels(fs, 3);
    phi01 = levels.phi01;
    j["phi01_source"] = "fluxonium";
    j["omega_F"] = levels.omega_F;
  } else {
    phi01 = p.number("phi01");
    j["phi01_source"] = "input";
  }
  j["phi01"] = phi01;
  const double mu = circuit::mu_factor(raw);
  const double nu = circuit::nu_factor(phi01);
  j["mu"] = mu;
  j["nu"] = nu;
  for (int k = 1; k <= raw.N; ++k) j[fmt::format("omega_k_{}", k)] = circuit::mode_frequency(k, c, raw);
  for (int k = 1; k <= raw.N; ++k) j[fmt::format("Omega_k_{}", k)] = circuit::vacuum_rabi(k, c, raw, phi01);
  const double w1 = circuit::mode_frequency(1, c, raw);
  const double g_sqrtN = circuit::vacuum_rabi(1, c, raw, phi01) / w1;
  j["g"] = g_sqrtN / std::sqrt(static_cast<double>(raw.N));
  j["g_sqrtN"] = g_sqrtN;
  j["line_impedance"] = raw.line_impedance();
  j["coupling_estimate"] = circuit::coupling_estimate(c.chi, raw.N, mu, nu, raw.line_impedance());
  j["coupling_estimate_50ohm"] = circuit::coupling_estimate(c.chi, raw.N, mu, nu);
  write_json(ctx.file("derive.json"), j);
}

void cmd_fluxonium(Context& ctx) {
  const auto& p = ctx.p;
  fluxonium::FluxoniumSpec fs;
  fs.E_J = p.number("E_J");
  fs.E_CJ = p.number("E_CJ");
  fs.E_LJ = p.number("E_LJ");
  fs.grid_half_width = p.number("grid_half_width");
  fs.grid_points = p.integer("grid_points");
  fs.tolerance = p.number("tolerance");
  const int n = p.integer("levels");
  const auto levels = fluxonium::solve_levels(fs, std::max(n, 3));
  const auto red = fluxonium::two_level_reduction(levels);

  Csv csv(ctx.file("fluxonium_levels.csv"), ctx.hash, {"level", "energy"});
  for (int i = 0; i < n; ++i) csv.row({std::to_string(i), num(levels.energies[static_cast<std::size_t>(i)])});

  json j;
  j["config_hash"] = ctx.hash;
  j["omega_F"] = red.omega_F;
  j["phi01"] = red.phi01;
  j["phi00"] = levels.phi00;
  j["anharmonicity"] = red.anharmonicity;
  j["weakly_anharmonic"] = red.weakly_anharmonic;
  j["grid_shift"] = levels.grid_shift;
  j["energies"] = std::vector<double>(levels.energies.begin(), levels.energies.begin() + n);
  write_json(ctx.file("fluxonium.json"), j);
  if (red.weakly_anharmonic) ctx.warn("weakly anharmonic: the two-level reduction is questionable");
}

void cmd_polariton(Context& ctx) {
  const auto& p = ctx.p;
  hopfield::HopfieldBlock block{p.number("omega_k"), p.number("omega_F"), 0.0};
  auto grid = p.grid("Omega");
  std::sort(grid.begin(), grid.end());
  if (grid.empty()) ctx.warn("empty Omega grid");
  const auto rows = hopfield::branch_sweep(block, grid);
  Csv csv(ctx.file("polariton.csv"), ctx.hash,
          {"Omega", "lower", "upper", "stable", "imaginary", "determinant"});
  for (const auto& r : rows) {
    csv.row({num(r.Omega), num(r.result.lower), num(r.result.upper), bool_text(r.result.stable),
             num(r.result.imaginary), num(r.result.determinant)});
  }
  json j;
  j["config_hash"] = ctx.hash;
  j["omega_k"] = block.omega_k;
  j["omega_F"] = block.omega_F;
  j["critical_coupling"] = hopfield::critical_coupling(block.omega_k, block.omega_F);
  write_json(ctx.file("polariton.json"), j);
}

std::vector<int> cutoffs_for(const Params& p, const ChainParams& c, double g) {
  if (p.str("cutoffs") != "auto") {
    auto cut = p.int_list("cutoffs");
    if (static_cast<int>(cut.size()) != c.n_modes) p.fail("cutoffs", "need one cutoff per mode");
    return cut;
  }
  return manybody::choose_cutoffs(c.N, c.n_modes, g, p.number("safety"), p.integer("floor"));
}

void cmd_spectrum(Context& ctx) {
  const auto& p = ctx.p;
  const auto c = chain_params(p);
  const auto gs = g_grid(p);
  const Sector sector = parse_sector(p.str("sector"));
  const int count = p.integer("count");
  if (count < 1) p.fail("count", "must be >= 1");
  if (gs.empty()) ctx.warn("empty g grid");

  std::vector<std::optional<manybody::SpectrumResult>> results(gs.size());
  std::vector<std::vector<int>> cuts(gs.size());
  std::vector<std::string> errors(gs.size());
  parallel_for(gs.size(), ctx.config.jobs, [&](std::size_t i) {
    try {
      cuts[i] = cutoffs_for(p, c, gs[i]);
      const auto spec = manybody::chain_spec(c.N, c.n_modes, gs[i], c.omega_F, c.omega_1, cuts[i]);
      results[i] = manybody::lowest_spectrum(spec, sector, count, c.spectrum);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<std::string> cols = {"g"};
  for (int k = 1; k <= c.n_modes; ++k) cols.push_back(fmt::format("n_max_{}", k));
  for (const char* s : {"level", "sector", "energy", "excitation", "residual"}) cols.emplace_back(s);
  Csv csv(ctx.file("spectrum.csv"), ctx.hash, cols);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (!results[i]) {
      ctx.failed(fmt::format("g={}: {}", num(gs[i]), errors[i]));
      continue;
    }
    const auto& r = *results[i];
    for (std::size_t l = 0; l < r.eigenvalues.size(); ++l) {
      std::vector<std::string> row = {num(gs[i])};
      for (int n : cuts[i]) row.push_back(std::to_string(n));
      row.push_back(std::to_string(l));
      row.push_back(to_string(r.sectors[l]));
      row.push_back(num(r.eigenvalues[l]));
      row.push_back(num(r.eigenvalues[l] - r.eigenvalues[0]));
      row.push_back(num(r.residuals[l]));
      csv.row(row);
    }
  }
}

std::vector<std::optional<manybody::SplittingRecord>> run_sweep(Context& ctx, const ChainParams& c,
                                                                const std::vector<double>& gs,
                                                                bool refine, double safety, int floor,
                                                                double relative_delta) {
  std::vector<std::optional<manybody::SplittingRecord>> out(gs.size());
  std::vector<std::string> errors(gs.size());
  manybody::ConvergenceCriteria crit;
  crit.relative_delta = relative_delta;
  parallel_for(gs.size(), ctx.config.jobs, [&](std::size_t i) {
    try {
      const double g = gs[i];
      std::vector<std::vector<int>> schedule =
          refine ? manybody::default_cutoff_schedule(c.N, c.n_modes, g)
                 : std::vector<std::vector<int>>{manybody::choose_cutoffs(c.N, c.n_modes, g, safety, floor)};
      const auto spec = manybody::chain_spec(c.N, c.n_modes, g, c.omega_F, c.omega_1, schedule.back());
      out[i] = manybody::converged_splitting(spec, schedule, crit, c.spectrum);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (!out[i]) ctx.failed(fmt::format("g={}: {}", num(gs[i]), errors[i]));
  }
  return out;
}

void cmd_splitting_sweep(Context& ctx) {
  const auto& p = ctx.p;
  const auto c = chain_params(p);
  const auto gs = g_grid(p);
  if (gs.empty()) ctx.warn("empty g grid");
  const auto recs = run_sweep(ctx, c, gs, p.boolean("refine"), p.number("safety"), p.integer("floor"),
                              p.number("relative_delta"));
  Csv csv(ctx.file("splitting_sweep.csv"), ctx.hash, sweep_columns(c.n_modes));
  for (const auto& r : recs) {
    if (r) csv.row(sweep_row(*r));
  }
}

void cmd_overlap(Context& ctx) {
  const auto& p = ctx.p;
  const auto c = chain_params(p);
  const auto gs = g_grid(p);
  if (gs.empty()) ctx.warn("empty g grid");

  struct Row {
    std::vector<int> cutoffs;
    asymptotics::SubspaceOverlap overlap;
    double delta = 0.0;
  };
  std::vector<std::optional<Row>> rows(gs.size());
  std::vector<std::string> errors(gs.size());
  parallel_for(gs.size(), ctx.config.jobs, [&](std::size_t i) {
    try {
      Row row;
      row.cutoffs = manybody::choose_cutoffs(c.N, c.n_modes, gs[i], p.number("safety"), p.integer("floor"));
      const auto spec = manybody::chain_spec(c.N, c.n_modes, gs[i], c.omega_F, c.omega_1, row.cutoffs);
      const auto doublet = manybody::ground_doublet(spec, c.spectrum);
      row.delta = doublet.record.delta;
      const auto gp = asymptotics::asymptotic_vacuum(spec, 1);
      const auto gm = asymptotics::asymptotic_vacuum(spec, -1);
      row.overlap = asymptotics::subspace_overlap(doublet.even_state, doublet.odd_state, gp, gm);
      rows[i] = std::move(row);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<std::string> cols = {"g"};
  for (int k = 1; k <= c.n_modes; ++k) cols.push_back(fmt::format("n_max_{}", k));
  for (const char* s : {"fidelity", "cos_1", "cos_2", "even_projection", "odd_projection", "delta"}) {
    cols.emplace_back(s);
  }
  Csv csv(ctx.file("overlap.csv"), ctx.hash, cols);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (!rows[i]) {
      ctx.failed(fmt::format("g={}: {}", num(gs[i]), errors[i]));
      continue;
    }
    const auto& r = *rows[i];
    std::vector<std::string> row = {num(gs[i])};
    for (int n : r.cutoffs) row.push_back(std::to_string(n));
    for (double x : {r.overlap.fidelity, r.overlap.cosines[0], r.overlap.cosines[1], r.overlap.per_vector[0],
                     r.overlap.per_vector[1], r.delta}) {
      row.push_back(num(x));
    }
    csv.row(row);
  }

  json j;
  j["config_hash"] = ctx.hash;
  j["N"] = c.N;
  j["N_m"] = c.n_modes;
  const double beta = asymptotics::beta_exponent(c.N, c.n_modes);
  j["beta_exponent"] = beta;
  j["beta_lower_bound"] = 1.6 * c.N * c.N;
  j["beta_upper_bound"] = 2.1 * c.N * c.N;
  json amps = json::array();
  for (double g : gs) {
    json a;
    a["g"] = g;
    json re = json::array(), im = json::array();
    for (const auto& z : asymptotics::coherent_amplitudes(c.N, c.n_modes, g)) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    a["alpha_re"] = re;
    a["alpha_im"] = im;
    amps.push_back(a);
  }
  j["amplitudes"] = amps;
  write_json(ctx.file("overlap.json"), j);
}

void cmd_disorder(Context& ctx) {
  const auto& p = ctx.p;
  const auto c = chain_params(p);
  const auto gs = p.grid("g");
  if (gs.size() != 1) p.fail("g", "disorder takes a single coupling value");
  const double g = gs.front();
  if (g < 0.0) p.fail("g", "must be >= 0");

  disorder::DisorderEnsembleSpec spec;
  spec.base = manybody::chain_spec(c.N, c.n_modes, g, c.omega_F, c.omega_1,
                                   manybody::choose_cutoffs(c.N, c.n_modes, g, p.number("safety"), p.integer("floor")));
  spec.amplitude = p.number("amplitude");
  spec.count = p.integer("count");
  spec.seed = ctx.config.seed;
  const auto engine = disorder::parse_engine(p.str("engine"));
  disorder::EnsembleOptions opts;
  opts.jobs = ctx.config.jobs;
  const int budget = p.integer("dimension_budget");
  if (budget < 1) p.fail("dimension_budget", "must be >= 1");
  opts.dimension_budget = static_cast<std::size_t>(budget);
  opts.spectrum = c.spectrum;

  const auto stats = disorder::ensemble_splitting(spec, engine, opts);
  if (stats.engine_fallback) ctx.warn("dimension above budget: analytic engine used instead of exact");

  std::vector<std::string> cols = {"realization", "seed"};
  for (int j = 1; j <= c.N; ++j) cols.push_back(fmt::format("omega_F_{}", j));
  cols.emplace_back("delta");
  Csv csv(ctx.file("disorder.csv"), ctx.hash, cols);
  for (const auto& r : stats.records) {
    if (!r.ok) {
      ctx.failed(fmt::format("realization {}: {}", r.realization, r.error));
      continue;
    }
    std::vector<std::string> row = {std::to_string(r.realization), std::to_string(r.seed)};
    for (double w : r.omega_F) row.push_back(num(w));
    row.push_back(num(r.delta));
    csv.row(row);
  }
  json j;
  j["config_hash"] = ctx.hash;
  j["mean"] = stats.mean_delta;
  j["std"] = stats.std_delta;
  j["engine"] = disorder::to_string(stats.engine);
  j["engine_fallback"] = stats.engine_fallback;
  j["g"] = g;
  j["N"] = c.N;
  j["N_m"] = c.n_modes;
  j["amplitude"] = spec.amplitude;
  j["realizations"] = spec.count;
  j["failures"] = stats.failures;
  j["seed"] = stats.seed;
  write_json(ctx.file("disorder_summary.json"), j);
}

std::vector<manybody::SplittingRecord> read_sweep_csv(const std::string& path, const Params& p) {
  std::ifstream in(path);
  if (!in) p.fail("input", "cannot open '" + path + "'");
  std::string line;
  std::vector<std::string> header;
  std::vector<manybody::SplittingRecord> out;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != header.size()) p.fail("input", "ragged row in '" + path + "'");
    manybody::SplittingRecord r;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& h = header[i];
      const auto& v = cells[i];
      try {
        if (h == "N") r.N = std::stoi(v);
        else if (h == "N_m") r.n_modes = std::stoi(v);
        else if (h == "g") r.g = std::stod(v);
        else if (h.rfind("n_max_", 0) == 0) r.cutoffs.push_back(std::stoi(v));
        else if (h == "E_even") r.E_even = std::stod(v);
        else if (h == "E_odd") r.E_odd = std::stod(v);
        else if (h == "delta") r.delta = std::stod(v);
        else if (h == "delta_over_omegaF") r.delta_over_omega_F = std::stod(v);
        else if (h == "converged") r.converged = v == "true";
      } catch (const std::exception&) {
        p.fail("input", "bad value '" + v + "' in column " + h);
      }
    }
    r.below_floor = r.delta_over_omega_F < manybody::splitting_floor;
    out.push_back(std::move(r));
  }
  if (header.empty()) p.fail("input", "no header in '" + path + "'");
  return out;
}

void cmd_fit_beta(Context& ctx) {
  const auto& p = ctx.p;
  std::vector<manybody::SplittingRecord> records;
  int N = 0, n_modes = 0;
  if (!p.empty("input")) {
    records = read_sweep_csv(p.str("input"), p);
    if (!records.empty()) {
      N = records.front().N;
      n_modes = records.front().n_modes;
    }
  } else {
    if (p.empty("N") || p.empty("N_m") || p.empty("g")) {
      p.fail("input", "give either input or N, N_m and g");
    }
    const auto c = chain_params(p);
    N = c.N;
    n_modes = c.n_modes;
    const auto recs = run_sweep(ctx, c, g_grid(p), true, 3.0, 4, p.number("relative_delta"));
    Csv csv(ctx.file("splitting_sweep.csv"), ctx.hash, sweep_columns(c.n_modes));
    for (const auto& r : recs) {
      if (!r) continue;
      csv.row(sweep_row(*r));
      records.push_back(*r);
    }
  }
  const auto fit = fit_beta(records);
  for (const auto& w : fit.warnings) ctx.warn(w);
  json j;
  j["config_hash"] = ctx.hash;
  j["N"] = fit.N;
  j["beta"] = fit.beta;
  j["intercept"] = fit.intercept;
  j["g2_min"] = fit.g2_min;
  j["g2_max"] = fit.g2_max;
  j["residual_rms"] = fit.residual_rms;
  j["points"] = fit.points;
  j["warnings"] = fit.warnings;
  j["beta_lower_bound"] = 1.6 * fit.N * fit.N;
  j["beta_upper_bound"] = 2.1 * fit.N * fit.N;
  j["within_bounds"] = fit.beta > 1.6 * fit.N * fit.N && fit.beta < 2.1 * fit.N * fit.N;
  if (N >= 2 && n_modes >= 1 && n_modes <= N) j["beta_exponent"] = asymptotics::beta_exponent(N, n_modes);
  write_json(ctx.file("fit_beta.json"), j);
}

}  // namespace

// --- public API --------------------------------------------------------------

ConfigMap parse_config(std::string_view text) {
  ConfigMap out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected key = value, got '{}'", line_no, line), "", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no), "", line_no);
    if (out.count(key)) {
      throw ConfigError(fmt::format("line {}: duplicate key '{}' (first on line {})", line_no, key, out[key].line),
                        key, line_no);
    }
    out[key] = {trim(line.substr(eq + 1)), line_no};
    if (end == text.size()) break;
  }
  return out;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = [] {
    std::vector<std::string> v;
    for (const auto& [name, keys] : schemas()) v.push_back(name);
    return v;
  }();
  return c;
}

std::vector<std::pair<std::string, std::string>> command_keys(const std::string& command) {
  const auto it = schemas().find(command);
  if (it == schemas().end()) throw ConfigError("unknown command '" + command + "'", "command", 0);
  return join(it->second, common_keys());
}

RunConfig resolve(const RunRequest& req) {
  const auto keys = command_keys(req.command);
  ConfigMap given;
  if (req.config_path) {
    std::ifstream in(*req.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + *req.config_path + "'", "config", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    given = parse_config(ss.str());
  }
  for (const auto& [k, v] : req.overrides) given[trim(k)] = {trim(v), 0};
  if (req.seed) given["seed"] = {std::to_string(*req.seed), 0};
  if (req.jobs) given["jobs"] = {std::to_string(*req.jobs), 0};
  if (req.out_dir) given["out"] = {*req.out_dir, 0};

  std::set<std::string> known;
  for (const auto& [k, d] : keys) known.insert(k);
  for (const auto& [k, e] : given) {
    if (!known.count(k)) {
      throw ConfigError(e.line > 0 ? fmt::format("line {}: unknown key '{}' for command {}", e.line, k, req.command)
                                   : fmt::format("unknown key '{}' for command {}", k, req.command),
                        k, e.line);
    }
  }

  RunConfig cfg;
  cfg.command = req.command;
  for (const auto& [k, d] : keys) {
    if (auto it = given.find(k); it != given.end()) {
      cfg.values[k] = it->second;
    } else if (d.empty() && !optional_empty.count(k)) {
      throw ConfigError(fmt::format("missing required key '{}' for command {}", k, req.command), k, 0);
    } else if (d.empty() && (k == "N" || k == "N_m" || k == "g") && req.command != "fit-beta") {
      throw ConfigError(fmt::format("missing required key '{}' for command {}", k, req.command), k, 0);
    } else {
      cfg.values[k] = {d, 0};
    }
  }

  Params p(cfg.values);
  const auto& seed_text = p.str("seed");
  std::uint64_t seed = 0;
  auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
  if (ec != std::errc() || ptr != seed_text.data() + seed_text.size()) {
    p.fail("seed", "expected a nonnegative integer");
  }
  cfg.seed = seed;
  cfg.jobs = p.integer("jobs");
  if (cfg.jobs < 0) p.fail("jobs", "must be >= 0 (0 = all cores)");
  cfg.out_dir = p.str("out");
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv(output_dir_env);
    cfg.out_dir = (env && *env) ? env : "cqedvac-out";
  }
  return cfg;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  feed("command=" + config.command + "\n");
  for (const auto& [k, e] : config.values) {
    if (k == "out" || k == "jobs") continue;
    feed(k + "=" + e.value + "\n");
  }
  return fmt::format("{:016x}", h);
}

int run(const RunConfig& config, std::ostream& log) {
  Context ctx{config, Params(config.values), fs::path(config.out_dir), config_hash(config), log, {}, 0};
  fs::create_directories(ctx.dir);

  static const std::map<std::string, void (*)(Context&)> table = {
      {"derive", cmd_derive},       {"fluxonium", cmd_fluxonium},
      {"polariton", cmd_polariton}, {"spectrum", cmd_spectrum},
      {"splitting-sweep", cmd_splitting_sweep}, {"overlap", cmd_overlap},
      {"disorder", cmd_disorder},   {"fit-beta", cmd_fit_beta},
  };
  const auto it = table.find(config.command);
  if (it == table.end()) throw ConfigError("unknown command '" + config.command + "'", "command", 0);

  try {
    it->second(ctx);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    ctx.failed(e.what());
  }

  json manifest;
  manifest["command"] = config.command;
  manifest["config_hash"] = ctx.hash;
  json values;
  for (const auto& [k, e] : config.values) {
    if (k == "out" || k == "jobs") continue;
    values[k] = e.value;
  }
  manifest["config"] = values;
  manifest["files"] = ctx.files;
  manifest["status"] = ctx.status == 0 ? "ok" : "failed";
  write_json(ctx.dir / "manifest.json", manifest);
  return ctx.status;
}

}  // namespace cqedvac::runner
