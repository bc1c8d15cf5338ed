#include <CLI11.hpp>
#include <iostream>

#include "cqedvac/error.hpp"
#include "cqedvac/runner.hpp"

namespace rn = cqedvac::runner;

int main(int argc, char** argv) {
  CLI::App app{"Vacuum degeneracy of a fluxonium chain in a multimode resonator"};
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::vector<std::string> set;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out;
  };
  std::map<std::string, Flags> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : rn::commands()) {
    auto& f = flags[name];
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", f.config, "key = value document");
    sub->add_option("--set", f.set, "override a key (key=value), repeatable");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--jobs", f.jobs, "worker threads (0 = all cores)");
    sub->add_option("--out", f.out, std::string("output directory (default $") + rn::output_dir_env + ")");
    std::string keys;
    for (const auto& [k, d] : rn::command_keys(name)) keys += "  " + k + (d.empty() ? "" : " = " + d) + "\n";
    sub->footer("Keys:\n" + keys);
    subs[name] = sub;
  }
  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      const auto& f = flags[name];
      rn::RunRequest req;
      req.command = name;
      if (sub->count("--config")) req.config_path = f.config;
      for (const auto& kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
          return 2;
        }
        req.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (sub->count("--seed")) req.seed = f.seed;
      if (sub->count("--jobs")) req.jobs = f.jobs;
      if (sub->count("--out")) req.out_dir = f.out;
      const auto cfg = rn::resolve(req);
      return rn::run(cfg, std::cerr);
    }
  } catch (const cqedvac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
