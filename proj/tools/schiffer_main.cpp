#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "schiffer/experiments.hpp"

namespace {

int run(const std::string& experiment, const std::vector<std::string>& config_paths,
        std::string out_dir, const schiffer::ExperimentOptions& cli_opts,
        bool tol_overridden, double tol) {
  using namespace schiffer;
  if (const char* env = std::getenv("SCHIFFER_OUT")) out_dir = env;

  Report report;
  report.seed = cli_opts.seed;

  for (const std::string& path : config_paths) {
    LoadedConfig cfg;
    try {
      cfg = load_config(path, cli_opts);
    } catch (const Error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 3;
    }
    if (tol_overridden) cfg.options.tol_identity = tol;
    if (cfg.has_domains) {
      const auto violations = validate_config(cfg.surface);
      if (!violations.empty()) {
        std::cerr << "invalid configuration " << cfg.name << ":\n";
        for (const auto& v : violations) std::cerr << "  - " << v.detail << "\n";
        return 3;
      }
    }
    report.config_hashes.push_back(cfg.raw_hash);
    try {
      run_experiment(experiment, cfg, report);
    } catch (const Error& e) {
      std::cerr << "experiment failed on " << cfg.name << ": " << e.what() << "\n";
      return 2;
    }
  }

  const int code = emit_report(report, out_dir);
  int passed = 0;
  for (const auto& c : report.checks) passed += c.pass ? 1 : 0;
  std::cout << passed << "/" << report.checks.size() << " checks passed; report in "
            << out_dir << "/report.json\n";
  for (const auto& c : report.checks) {
    if (!c.pass) {
      std::cout << "FAIL " << c.config << ":" << c.name << " measured=" << c.measured
                << " tolerance=" << c.tolerance << "\n";
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schiffer comparison operators and the Plemelj-Sokhotski jump "
               "decomposition on cut Riemann surfaces"};
  app.require_subcommand(1);

  std::vector<std::string> config_paths;
  std::string out_dir = "out";
  schiffer::ExperimentOptions opts;
  double tol = 1e-6;
  bool tol_set = false;

  const std::vector<std::string> names = {"identities", "isomorphism", "jump",
                                          "density", "adjoint", "all"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment suite");
    sub->add_option("--config", config_paths, "configuration JSON (repeatable)")
        ->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--truncation", opts.truncation, "expansion truncation N");
    sub->add_option("--seed", opts.seed, "seed for randomized test vectors");
    sub->add_option("--tol", tol, "identity tolerance override")
        ->each([&](const std::string&) { tol_set = true; });
  }

  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();
  return run(experiment, config_paths, out_dir, opts, tol_set, tol);
}
