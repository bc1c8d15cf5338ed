#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cqedvac/asymptotics.hpp"
#include "cqedvac/circuit.hpp"
#include "cqedvac/disorder.hpp"
#include "cqedvac/error.hpp"
#include "cqedvac/fluxonium.hpp"
#include "cqedvac/hopfield.hpp"
#include "cqedvac/manybody.hpp"
#include "cqedvac/runner.hpp"

namespace py = pybind11;
using namespace cqedvac;

namespace {

py::dict record_dict(const manybody::SplittingRecord& r) {
  py::dict d;
  d["N"] = r.N;
  d["N_m"] = r.n_modes;
  d["g"] = r.g;
  d["cutoffs"] = r.cutoffs;
  d["E_even"] = r.E_even;
  d["E_odd"] = r.E_odd;
  d["delta"] = r.delta;
  d["delta_over_omega_F"] = r.delta_over_omega_F;
  d["below_floor"] = r.below_floor;
  d["converged"] = r.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Vacuum degeneracy of a fluxonium chain in a multimode resonator";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<CutoffError>(m, "CutoffError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "polariton",
      [](double omega_k, double omega_F, double Omega) {
        const auto r = hopfield::polariton_frequencies({omega_k, omega_F, Omega});
        py::dict d;
        d["lower"] = r.lower;
        d["upper"] = r.upper;
        d["stable"] = r.stable;
        d["imaginary"] = r.imaginary;
        d["determinant"] = r.determinant;
        return d;
      },
      py::arg("omega_k"), py::arg("omega_F"), py::arg("Omega"));
  m.def("critical_coupling", &hopfield::critical_coupling, py::arg("omega_k"), py::arg("omega_F"));

  m.def(
      "fluxonium_levels",
      [](double E_J, double E_CJ, double E_LJ, int levels) {
        fluxonium::FluxoniumSpec s;
        s.E_J = E_J;
        s.E_CJ = E_CJ;
        s.E_LJ = E_LJ;
        const auto lv = fluxonium::solve_levels(s, std::max(levels, 3));
        const auto red = fluxonium::two_level_reduction(lv);
        py::dict d;
        d["energies"] = std::vector<double>(lv.energies.begin(), lv.energies.begin() + levels);
        d["omega_F"] = lv.omega_F;
        d["phi01"] = lv.phi01;
        d["anharmonicity"] = red.anharmonicity;
        d["weakly_anharmonic"] = red.weakly_anharmonic;
        return d;
      },
      py::arg("E_J"), py::arg("E_CJ"), py::arg("E_LJ"), py::arg("levels") = 4);

  m.def("coupling_estimate", &circuit::coupling_estimate, py::arg("chi"), py::arg("N"), py::arg("mu"),
        py::arg("nu"), py::arg("z_r") = units::line_impedance);

  m.def(
      "splitting",
      [](int N, int n_modes, double g, double omega_F, double omega_1) {
        const auto schedule = manybody::default_cutoff_schedule(N, n_modes, g);
        const auto spec = manybody::chain_spec(N, n_modes, g, omega_F, omega_1, schedule.back());
        py::gil_scoped_release release;
        const auto r = manybody::converged_splitting(spec, schedule);
        py::gil_scoped_acquire acquire;
        return record_dict(r);
      },
      py::arg("N"), py::arg("N_m"), py::arg("g"), py::arg("omega_F") = 1.0, py::arg("omega_1") = 1.0,
      "Sector ground splitting with the default cutoff refinement.");

  m.def("analytic_splitting_N2", &asymptotics::analytic_splitting_N2, py::arg("omega_F"), py::arg("omega_1"),
        py::arg("g"));
  m.def("beta_exponent", &asymptotics::beta_exponent, py::arg("N"), py::arg("N_m"));
  m.def("coherent_amplitudes", &asymptotics::coherent_amplitudes, py::arg("N"), py::arg("N_m"), py::arg("g"));
  m.def(
      "ferromagnetic_minima",
      [](int N, int n_modes) { return asymptotics::minimize_pseudospin_config(N, n_modes).minimizers; },
      py::arg("N"), py::arg("N_m"));

  m.def(
      "run",
      [](const std::string& command, const std::map<std::string, std::string>& settings, const std::string& out,
         std::uint64_t seed) {
        runner::RunRequest req;
        req.command = command;
        for (const auto& [k, v] : settings) req.overrides.emplace_back(k, v);
        req.out_dir = out;
        req.seed = seed;
        const auto cfg = runner::resolve(req);
        std::ostringstream log;
        const int status = runner::run(cfg, log);
        return py::make_tuple(status, log.str());
      },
      py::arg("command"), py::arg("settings"), py::arg("out"), py::arg("seed") = 1,
      "Runs a CLI command in-process; returns (status, log).");
  m.attr("commands") = runner::commands();
}
