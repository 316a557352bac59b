// ctrw: reproduce the sign-memory CTRW mixing experiments from the command line.
//
//   ctrw fig1 [--paths N] [--seed S] [--out DIR]
//   ctrw fig2 --epsilon 0.02
//   ctrw fig3 --r 0.02,0.2
//   ctrw sweep --r 0,0.25,0.5 --config sweep.json
//   ctrw analytic [--preset fig1|fig2|fig3] [--process A|B|AB]
//   ctrw simulate --config custom.json
//
// Exit codes: 0 success, 1 validation error, 2 self-check failure
// (|MC - analytic| > 4 stderr), 3 I/O error.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctrw/analytics.hpp"
#include "ctrw/errors.hpp"
#include "ctrw/experiments.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kSelfCheck = 2, kIo = 3 };

struct Flags {
  std::string config_file;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  double horizon = 0.0;
  double epsilon = 0.0;
  std::vector<double> r_values;
  std::string out_dir;
  std::string format = "csv";
  std::size_t grid_points = 0;
  unsigned workers = 0;
  std::string preset = "fig1";
  std::string process = "AB";
  std::string initial_sign = "stationary";
};

struct Options {
  CLI::Option* seed;
  CLI::Option* paths;
  CLI::Option* horizon;
  CLI::Option* epsilon;
  CLI::Option* r;
  CLI::Option* out;
  CLI::Option* format;
  CLI::Option* grid;
  CLI::Option* workers;
  CLI::Option* initial_sign;
};

ctrw::ExperimentConfig build_config(const Flags& f, const Options& o, ctrw::Experiment experiment) {
  ctrw::ExperimentConfig cfg =
      f.config_file.empty() ? ctrw::ExperimentConfig{} : ctrw::load_experiment_config(f.config_file);
  cfg.experiment = experiment;
  if (o.seed->count()) cfg.sim.master_seed = f.seed;
  if (o.paths->count()) cfg.sim.n_paths = f.paths;
  if (o.horizon->count()) cfg.sim.horizon = f.horizon;
  if (o.epsilon->count()) cfg.epsilon = f.epsilon;
  if (o.r->count()) {
    cfg.r_values = f.r_values;
    cfg.r_values_explicit = true;
  }
  if (o.out->count()) cfg.output_dir = f.out_dir;
  if (o.format->count()) {
    cfg.format = f.format == "json" ? ctrw::TableFormat::Json : ctrw::TableFormat::Csv;
  }
  if (o.grid->count()) cfg.sim.grid_points = f.grid_points;
  if (o.workers->count()) cfg.sim.workers = f.workers;
  if (o.initial_sign->count()) {
    static const std::map<std::string, ctrw::InitialSignMode> modes = {
        {"stationary", ctrw::InitialSignMode::Stationary},
        {"positive", ctrw::InitialSignMode::FixedPositive},
        {"negative", ctrw::InitialSignMode::FixedNegative}};
    cfg.sim.initial_sign_mode = modes.at(f.initial_sign);
  }
  cfg.validate();
  return cfg;
}

ctrw::ProcessSpec preset_process(const Flags& f, const ctrw::ExperimentConfig& cfg) {
  if (cfg.process) return *cfg.process;
  ctrw::MixedSpec m = ctrw::presets::fig1();
  if (f.preset == "fig2") {
    m = ctrw::presets::fig2(cfg.epsilon);
  } else if (f.preset == "fig3") {
    m = ctrw::presets::fig3(cfg.r_values.empty() ? 0.5 : cfg.r_values.front());
  } else if (!cfg.r_values.empty()) {
    m = m.with_r(cfg.r_values.front());
  }
  if (f.process == "A") return m.memoryless();
  if (f.process == "B") return m.memory();
  return m;
}

int report_outcome(const ctrw::ExperimentReport& report) {
  for (const auto& c : report.checks) {
    std::printf("%-34s t=%-6g analytic=% .6f mc=% .6f se=%.6f z=%.2f %s\n", c.quantity.c_str(),
                c.t, c.analytic, c.mc, c.std_error, c.z, c.passed ? "ok" : "FAIL");
  }
  for (const auto& f : report.files) std::printf("wrote %s\n", f.string().c_str());
  if (!report.self_check_passed) {
    std::fprintf(stderr, "self-check failed: some Monte Carlo estimate is more than %g standard "
                         "errors from its closed form\n", ctrw::kSelfCheckSigmas);
    return kSelfCheck;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign-memory CTRW mixing experiments (processes A, B, AB)"};
  app.require_subcommand(1);
  Flags f;

  Options o{};
  o.seed = app.add_option("--seed", f.seed, "Master seed (u64)");
  o.paths = app.add_option("--paths", f.paths, "Number of Monte Carlo paths");
  o.horizon = app.add_option("--horizon", f.horizon, "Simulation horizon");
  o.epsilon = app.add_option("--epsilon", f.epsilon, "Perturbation of q0, q1, q2 (fig2)");
  o.r = app.add_option("--r", f.r_values, "Mixing probabilities, comma separated")->delimiter(',');
  o.out = app.add_option("--out", f.out_dir, "Output directory");
  o.format = app.add_option("--format", f.format, "Table format")
                 ->check(CLI::IsMember({"csv", "json"}));
  o.grid = app.add_option("--grid-points", f.grid_points, "Time grid points");
  o.workers = app.add_option("--workers", f.workers, "Worker threads (0 = all cores)");
  o.initial_sign = app.add_option("--initial-sign", f.initial_sign, "Initial sign memory")
                       ->check(CLI::IsMember({"stationary", "positive", "negative"}));
  app.add_option("--config", f.config_file, "JSON experiment manifest; flags override it");
  app.add_option("--preset", f.preset, "Parameter set for analytic/simulate")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  app.add_option("--process", f.process, "Component for analytic/simulate")
      ->check(CLI::IsMember({"A", "B", "AB"}));

  auto* fig1 = app.add_subcommand("fig1", "Unbiased A and B, positively biased mixture")->fallthrough();
  auto* fig2 = app.add_subcommand("fig2", "Two losing processes, winning mixture")->fallthrough();
  auto* fig3 = app.add_subcommand("fig3", "Sign of the AB drift controlled by r")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "Grids over r and epsilon")->fallthrough();
  auto* analytic = app.add_subcommand("analytic", "Print closed-form quantities")->fallthrough();
  auto* simulate = app.add_subcommand("simulate", "Raw ensemble run")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*analytic) {
      const auto cfg = build_config(f, o, ctrw::Experiment::Custom);
      std::cout << ctrw::analytic_report(preset_process(f, cfg), cfg.format);
      return kOk;
    }
    if (*simulate) {
      auto cfg = build_config(f, o, ctrw::Experiment::Custom);
      cfg.process = preset_process(f, cfg);
      return report_outcome(ctrw::run_simulate(cfg));
    }
    if (*fig1) return report_outcome(ctrw::run_fig1(build_config(f, o, ctrw::Experiment::Fig1)));
    if (*fig2) return report_outcome(ctrw::run_fig2(build_config(f, o, ctrw::Experiment::Fig2)));
    if (*fig3) return report_outcome(ctrw::run_fig3(build_config(f, o, ctrw::Experiment::Fig3)));
    if (*sweep) return report_outcome(ctrw::run_sweep(build_config(f, o, ctrw::Experiment::Sweep)));
  } catch (const ctrw::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  }
  return kValidation;
}
