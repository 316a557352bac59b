#pragma once

// Reproduction harness for the three published experiments plus parameter
// sweeps. Each runner writes plot-ready CSV (or JSON) tables into
// config.output_dir and a JSON summary that pairs every Monte Carlo estimate
// with its closed-form target and standard error.
//
// File layout (prefix = experiment name):
//   <prefix>_path_<proc>.csv       t,X          one sample path, step function
//   <prefix>_drift_lines.csv       t,<analytic drifts per process>
//   <prefix>_ensemble_<proc>.csv   t,mc_mean,std_error,analytic
//   fig3_drifts.csv                r,analytic,mc,std_error
//   sweep_r.csv                    r,analytic,mc,std_error
//   sweep_epsilon.csv              epsilon,mu_a,mu_b,mu_ab,mu_ab_reference,mc,std_error
//   <prefix>_summary.json

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ctrw/process.hpp"
#include "ctrw/simulate.hpp"

namespace ctrw {

enum class Experiment { Fig1, Fig2, Fig3, Sweep, Custom };
enum class TableFormat { Csv, Json };

/// Every |mc - analytic| above this many standard errors fails the self-check.
inline constexpr double kSelfCheckSigmas = 4.0;

struct ExperimentConfig {
  Experiment experiment = Experiment::Fig1;
  double epsilon = 0.02;
  /// Mixing probabilities for fig3 and sweep; empty selects the defaults.
  std::vector<double> r_values;
  /// Perturbations for the epsilon table of sweep; empty selects the default.
  std::vector<double> epsilon_values;
  SimConfig sim;
  std::filesystem::path output_dir = "ctrw_out";
  TableFormat format = TableFormat::Csv;
  /// Base process for sweep / analytic / simulate (Custom). Defaults to fig1.
  std::optional<ProcessSpec> process;
  /// Reject empty explicit grids (set by the CLI when --r was given).
  bool r_values_explicit = false;

  /// Throws ValidationError for epsilon < 0, r outside [0,1], an explicitly
  /// empty r grid, or fewer than two paths.
  void validate() const;
};

/// Reads a JSON experiment manifest. Missing keys keep their defaults.
/// Throws IoError when the file cannot be read and ValidationError when it
/// does not parse or holds invalid values.
ExperimentConfig load_experiment_config(const std::filesystem::path& file);
ExperimentConfig parse_experiment_config(const std::string& json_text);

/// Parses the "process" block of a manifest (see README for the schema).
ProcessSpec parse_process_spec(const std::string& json_text);

struct CheckResult {
  std::string quantity;
  double t;
  double analytic;
  double mc;
  double std_error;
  double z;
  bool passed;
};

struct ExperimentReport {
  std::vector<std::filesystem::path> files;
  std::vector<CheckResult> checks;
  bool self_check_passed = true;
  std::string summary_json;
};

ExperimentReport run_fig1(const ExperimentConfig& config);
ExperimentReport run_fig2(const ExperimentConfig& config);
ExperimentReport run_fig3(const ExperimentConfig& config);
ExperimentReport run_sweep(const ExperimentConfig& config);
/// Raw ensemble of config.process (default: fig1 AB).
ExperimentReport run_simulate(const ExperimentConfig& config);

/// Closed-form quantities of a process as JSON (or key,value CSV).
std::string analytic_report(const ProcessSpec& spec, TableFormat format);

/// Drift rates per unit lambda*t of the reference polynomials for the fig2 family,
///   mu_a = -2 eps,  mu_b = -(8 eps + 15 eps^2)/16,  mu = (36 - 833 eps - 340 eps^2)/640,
/// kept verbatim as a reference next to the exact closed form.
struct ReferenceDrifts {
  double mu_a;
  double mu_b;
  double mu_ab;
};
ReferenceDrifts fig2_reference_drifts(double epsilon, double lambda, double t);

/// Positive root of 340 eps^2 + 833 eps - 36 (the reference polynomial).
double fig2_reference_epsilon_star();
/// Sign change of the exact AB drift of the fig2 family in epsilon.
double fig2_epsilon_star();
/// Sign change of the exact AB drift of the fig3 family in r (83/1638).
double fig3_r_star();

}  // namespace ctrw
