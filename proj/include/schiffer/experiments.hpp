#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "schiffer/schiffer_ops.hpp"

namespace schiffer {

struct ExperimentOptions {
  int truncation = 16;
  int n_r = 24;
  int n_t = 128;
  int M = 256;
  double tol_identity = 1e-6;
  double tol_membership = 1e-10;
  double tol_fit = 1e-5;
  std::uint64_t seed = 7;
};

struct DensitySetup {
  Annulus sigma{0.5, 1.0};         // the fixed inner region
  Annulus sigma_outer{0.25, 2.0};  // positive-case superset
  Annulus counterexample{0.0, 1.0};
};

struct LoadedConfig {
  std::string path;
  std::string name;
  bool has_domains = false;
  SurfaceConfig surface;
  bool has_density = false;
  DensitySetup density;
  ExperimentOptions options;  // config-file overrides merged with CLI
  std::string raw_hash;
};

/// Parse a JSON configuration file; throws Error(IOFailure) on bad input.
LoadedConfig load_config(const std::string& path, const ExperimentOptions& defaults);

struct CheckRecord {
  std::string name;
  std::string anchor;  // stable id of the statement being exercised
  std::string config;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SweepTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string version = "0.1.0";
  std::uint64_t seed = 0;
  int thread_count = 1;
  std::vector<std::string> config_hashes;
  std::vector<CheckRecord> checks;
  std::vector<SweepTable> tables;

  void add(const std::string& name, const std::string& anchor, const std::string& config,
           double measured, double tolerance);
  /// Inverted check: passes when the measured violation exceeds the floor.
  void add_negative(const std::string& name, const std::string& anchor,
                    const std::string& config, double measured, double floor);
  bool all_pass() const;
};

/// The statements every full run must exercise at least once.
const std::vector<std::string>& coverage_anchors();

void run_foundations(const LoadedConfig& cfg, Report& report);
void run_identity_audit(const LoadedConfig& cfg, Report& report);
void run_isomorphism(const LoadedConfig& cfg, Report& report);
void run_jump_experiment(const LoadedConfig& cfg, Report& report);
void run_density_experiment(const LoadedConfig& cfg, Report& report);
void run_adjoint_experiment(const LoadedConfig& cfg, Report& report);

/// Dispatch by experiment name: identities | isomorphism | jump | density |
/// adjoint | all.
void run_experiment(const std::string& experiment, const LoadedConfig& cfg,
                    Report& report);

/// Writes report.json and the CSV tables into out_dir. Returns the process
/// exit code: 0 all pass, 2 check failures.
int emit_report(const Report& report, const std::string& out_dir);

}  // namespace schiffer
