#include "ctrw/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "ctrw/analytics.hpp"
#include "ctrw/errors.hpp"
#include "ctrw/spectral.hpp"

namespace ctrw {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Formatting and file output

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, result.ptr);
}

// NaN/inf have no JSON spelling; emit null.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + file.string());
}

std::string render_table(const Table& table, TableFormat format) {
  std::ostringstream out;
  if (format == TableFormat::Csv) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      out << (c ? "," : "") << table.header[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
      out << '\n';
    }
    return out.str();
  }
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.header[c]] = number_or_null(row[c]);
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

class OutputSink {
public:
  OutputSink(fs::path dir, TableFormat format) : dir_(std::move(dir)), format_(format) {
    ensure_directory(dir_);
  }

  void table(const std::string& stem, const Table& t) {
    const fs::path file = dir_ / (stem + (format_ == TableFormat::Csv ? ".csv" : ".json"));
    write_text(file, render_table(t, format_));
    files_.push_back(file);
  }

  void summary(const std::string& stem, const json& j) {
    const fs::path file = dir_ / (stem + ".json");
    write_text(file, j.dump(2) + "\n");
    files_.push_back(file);
  }

  const std::vector<fs::path>& files() const { return files_; }

private:
  fs::path dir_;
  TableFormat format_;
  std::vector<fs::path> files_;
};

// ---------------------------------------------------------------------------
// JSON <-> domain types

json law_to_json(const JumpLaw& law) {
  return {{"q", law.q()}, {"gamma", law.gamma()}, {"eta", law.eta()}};
}

json spec_to_json(const ProcessSpec& spec) {
  struct Visitor {
    json operator()(const MemorylessSpec& a) const {
      return {{"kind", "A"}, {"lambda", a.lambda()}, {"law", law_to_json(a.law())}};
    }
    json operator()(const SignMemorySpec& b) const {
      return {{"kind", "B"},
              {"lambda", b.lambda()},
              {"pos", law_to_json(b.law_pos())},
              {"neg", law_to_json(b.law_neg())}};
    }
    json operator()(const MixedSpec& m) const {
      return {{"kind", "AB"},
              {"lambda", m.lambda()},
              {"r", m.r()},
              {"a", law_to_json(m.a_law())},
              {"pos", law_to_json(m.law_pos())},
              {"neg", law_to_json(m.law_neg())}};
    }
  };
  return std::visit(Visitor{}, spec);
}

bool is_unbiased_marker(const json& v) { return v.is_string() && v.get<std::string>() == "unbiased"; }

double number_field(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

JumpLaw plain_law(const json& obj) {
  if (!obj.is_object()) throw ValidationError("jump law must be an object {q, gamma, eta}");
  if (is_unbiased_marker(obj.value("q", json())) || is_unbiased_marker(obj.value("eta", json()))) {
    throw ValidationError("\"unbiased\" is only accepted for a.q, neg.q and neg.eta");
  }
  return JumpLaw(number_field(obj, "q", 0.5), number_field(obj, "gamma", 1.0),
                 number_field(obj, "eta", 1.0));
}

// Law of process A; q may be "unbiased".
JumpLaw memoryless_law(const json& obj) {
  if (!obj.is_object()) throw ValidationError("jump law must be an object {q, gamma, eta}");
  const double gamma = number_field(obj, "gamma", 1.0);
  const double eta = number_field(obj, "eta", 1.0);
  const double q = is_unbiased_marker(obj.value("q", json())) ? solve_unbiased_q0(gamma, eta)
                                                              : number_field(obj, "q", 0.5);
  return JumpLaw(q, gamma, eta);
}

// Law after a negative jump; q or eta may be "unbiased".
JumpLaw negative_law(const json& obj, const JumpLaw& pos) {
  if (!obj.is_object()) throw ValidationError("jump law must be an object {q, gamma, eta}");
  const bool solve_q = is_unbiased_marker(obj.value("q", json()));
  const bool solve_eta = is_unbiased_marker(obj.value("eta", json()));
  if (solve_q && solve_eta) throw ValidationError("neg: only one of q, eta may be \"unbiased\"");
  const double gamma = number_field(obj, "gamma", 1.0);
  if (solve_q) {
    const double eta = number_field(obj, "eta", 1.0);
    return JumpLaw(solve_unbiased_q2(pos.q(), pos.gamma(), pos.eta(), gamma, eta), gamma, eta);
  }
  const double q = number_field(obj, "q", 0.5);
  if (solve_eta) {
    return JumpLaw(q, gamma, solve_unbiased_eta2(pos.q(), pos.gamma(), pos.eta(), q, gamma));
  }
  return JumpLaw(q, gamma, number_field(obj, "eta", 1.0));
}

ProcessSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("process must be a JSON object");
  const std::string kind = j.value("kind", std::string("AB"));
  const double lambda = number_field(j, "lambda", 20.0);
  if (kind == "A") {
    return MemorylessSpec(lambda, memoryless_law(j.value("law", json::object())));
  }
  const JumpLaw pos = plain_law(j.value("pos", json::object()));
  const JumpLaw neg = negative_law(j.value("neg", json::object()), pos);
  if (kind == "B") return SignMemorySpec(lambda, pos, neg);
  if (kind == "AB") {
    return MixedSpec(lambda, number_field(j, "r", 0.5),
                     memoryless_law(j.value("a", json::object())), pos, neg);
  }
  throw ValidationError("process kind must be one of A, B, AB; got '" + kind + "'");
}

Experiment experiment_from_string(const std::string& name) {
  if (name == "fig1") return Experiment::Fig1;
  if (name == "fig2") return Experiment::Fig2;
  if (name == "fig3") return Experiment::Fig3;
  if (name == "sweep") return Experiment::Sweep;
  if (name == "custom") return Experiment::Custom;
  throw ValidationError("unknown experiment '" + name + "'");
}

InitialSignMode sign_mode_from_string(const std::string& name) {
  if (name == "stationary") return InitialSignMode::Stationary;
  if (name == "positive") return InitialSignMode::FixedPositive;
  if (name == "negative") return InitialSignMode::FixedNegative;
  throw ValidationError("initial_sign_mode must be stationary, positive or negative");
}

std::string sign_mode_name(InitialSignMode mode) {
  switch (mode) {
    case InitialSignMode::FixedPositive: return "positive";
    case InitialSignMode::FixedNegative: return "negative";
    case InitialSignMode::Stationary: break;
  }
  return "stationary";
}

std::vector<double> number_list(const json& v, const char* key) {
  if (!v.is_array()) throw ValidationError(std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ValidationError(std::string(key) + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

json sim_to_json(const SimConfig& sim) {
  return {{"n_paths", sim.n_paths},
          {"horizon", sim.horizon},
          {"grid_points", sim.grid_points},
          {"master_seed", sim.master_seed},
          {"initial_sign_mode", sign_mode_name(sim.initial_sign_mode)}};
}

// ---------------------------------------------------------------------------
// Numerics shared by the runners

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double f_lo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Interior sign changes of f on [0, 1].
std::vector<double> sign_changes(const std::function<double(double)>& f) {
  constexpr int kScan = 1000;
  std::vector<double> roots;
  double prev_x = 0.0;
  double prev_f = f(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double x = static_cast<double>(i) / kScan;
    const double fx = f(x);
    if (prev_f * fx < 0.0) roots.push_back(bisect(f, prev_x, x));
    prev_x = x;
    prev_f = fx;
  }
  return roots;
}

CheckResult make_check(std::string quantity, double t, double analytic, double mc,
                       double std_error) {
  const double diff = std::abs(mc - analytic);
  const double z = std_error > 0.0 ? diff / std_error : (diff == 0.0 ? 0.0 : INFINITY);
  return {std::move(quantity), t, analytic, mc, std_error, z, z <= kSelfCheckSigmas};
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const CheckResult& c : checks) {
    arr.push_back({{"quantity", c.quantity},
                   {"t", c.t},
                   {"analytic", c.analytic},
                   {"mc", c.mc},
                   {"std_error", c.std_error},
                   {"z", number_or_null(c.z)},
                   {"passed", c.passed}});
  }
  return arr;
}

Table path_table(const Path& path) {
  Table t{{"t", "X"}, {}};
  t.rows.reserve(path.events.size() + 2);
  double x = 0.0;
  t.rows.push_back({0.0, 0.0});
  for (const Event& e : path.events) {
    x += e.jump;
    t.rows.push_back({e.time, x});
  }
  t.rows.push_back({path.horizon, x});
  return t;
}

Table ensemble_table(const EnsembleStats& stats, const ProcessSpec& spec) {
  Table t{{"t", "mc_mean", "std_error", "analytic"}, {}};
  for (std::size_t k = 0; k < stats.t_grid.size(); ++k) {
    t.rows.push_back(
        {stats.t_grid[k], stats.mean[k], stats.std_error[k], drift(spec, stats.t_grid[k])});
  }
  return t;
}

std::vector<double> default_fig3_r() { return {0.0, 0.02, 0.05, 0.1, 0.2, 0.5, 0.8, 1.0}; }

std::vector<double> uniform_grid(double lo, double hi, int intervals) {
  std::vector<double> grid(intervals + 1);
  for (int i = 0; i <= intervals; ++i) grid[i] = lo + (hi - lo) * i / intervals;
  grid.back() = hi;
  return grid;
}

MixedSpec perturbed(const MixedSpec& base, double epsilon) {
  auto lower = [epsilon](const JumpLaw& law) {
    return JumpLaw(law.q() - epsilon, law.gamma(), law.eta());
  };
  return MixedSpec(base.lambda(), base.r(), lower(base.a_law()), lower(base.law_pos()),
                   lower(base.law_neg()));
}

void finish(ExperimentReport& report, json& summary, OutputSink& sink, const std::string& stem) {
  report.self_check_passed =
      std::all_of(report.checks.begin(), report.checks.end(), [](auto& c) { return c.passed; });
  summary["checks"] = checks_to_json(report.checks);
  summary["self_check_sigmas"] = kSelfCheckSigmas;
  summary["self_check_passed"] = report.self_check_passed;
  json files = json::array();
  for (const auto& f : sink.files()) files.push_back(f.filename().string());
  files.push_back(stem + ".json");
  summary["files"] = files;
  sink.summary(stem, summary);
  report.files = sink.files();
  report.summary_json = summary.dump(2);
}

// Shared body of fig1 / fig2: A, B and AB built from one MixedSpec.
ExperimentReport run_triplet(const std::string& name, const MixedSpec& m,
                             const ExperimentConfig& config, json summary) {
  config.validate();
  OutputSink sink(config.output_dir, config.format);
  ExperimentReport report;
  const SimConfig& sim = config.sim;
  const double horizon = sim.horizon;

  const std::vector<std::pair<std::string, ProcessSpec>> processes = {
      {"A", m.memoryless()}, {"B", m.memory()}, {"AB", m}};

  summary["experiment"] = name;
  summary["parameters"] = spec_to_json(m);
  summary["sim"] = sim_to_json(sim);
  summary["analytic_mu_a_at_1"] = drift_a(m.memoryless(), 1.0);
  summary["analytic_mu_b_at_1"] = drift_b(m.memory(), 1.0);
  summary["analytic_mu_ab_at_1"] = drift_ab(m, 1.0);
  summary["superposition_at_1"] =
      m.r() * drift_a(m.memoryless(), 1.0) + (1.0 - m.r()) * drift_b(m.memory(), 1.0);
  summary["beta"] = beta(m.memory());
  summary["alpha"] = alpha(m);

  Table lines{{"t", "mu_a", "mu_b", "mu_ab"}, {}};
  for (double t : sim.time_grid()) {
    lines.rows.push_back({t, drift_a(m.memoryless(), t), drift_b(m.memory(), t), drift_ab(m, t)});
  }
  sink.table(name + "_drift_lines", lines);

  json mc = json::object();
  std::uint64_t path_index = 0;
  for (const auto& [label, spec] : processes) {
    const Path path = simulate_path(spec, horizon, sim.initial_sign_mode, sim.master_seed,
                                    path_index++);
    sink.table(name + "_path_" + label, path_table(path));

    const EnsembleStats stats = simulate_ensemble(spec, sim);
    sink.table(name + "_ensemble_" + label, ensemble_table(stats, spec));

    const double mean = stats.mean.back();
    const double se = stats.std_error.back();
    const double target = drift(spec, horizon);
    report.checks.push_back(make_check("mu_" + label, horizon, target, mean, se));

    const SignFraction sf = sign_fraction_from(stats);
    report.checks.push_back(make_check("positive_fraction_" + label, horizon,
                                       stationary_positive_probability(spec), sf.fraction,
                                       sf.std_error));

    std::string key = label;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (horizon == 1.0) {
      summary["mc_mean_" + key + "_at_1"] = mean;
      summary["stderr_" + key + "_at_1"] = se;
    }
    mc[label] = {{"t", horizon},
                 {"mc_mean", mean},
                 {"std_error", se},
                 {"analytic", target},
                 {"positive_fraction", sf.fraction},
                 {"positive_fraction_std_error", sf.std_error},
                 {"total_jumps", stats.total_jumps}};
  }
  summary["monte_carlo"] = mc;
  finish(report, summary, sink, name + "_summary");
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (!(std::isfinite(epsilon) && epsilon >= 0.0)) {
    throw ValidationError("epsilon must be non-negative");
  }
  if (r_values_explicit && r_values.empty()) throw ValidationError("empty r grid");
  for (double r : r_values) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw ValidationError("r values must lie in [0, 1], got " + format_number(r));
    }
  }
  for (double e : epsilon_values) {
    if (!(std::isfinite(e) && e >= 0.0)) throw ValidationError("epsilon values must be >= 0");
  }
  sim.validate();
  if (sim.n_paths < 2) throw ValidationError("experiments need at least two paths");
}

ProcessSpec parse_process_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("process spec is not valid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) cfg.experiment = experiment_from_string(j.at("experiment"));
    cfg.epsilon = number_field(j, "epsilon", cfg.epsilon);
    if (j.contains("r_values")) {
      cfg.r_values = number_list(j.at("r_values"), "r_values");
      cfg.r_values_explicit = true;
    }
    if (j.contains("epsilon_values")) {
      cfg.epsilon_values = number_list(j.at("epsilon_values"), "epsilon_values");
    }
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("format")) {
      const std::string f = j.at("format");
      if (f == "csv") cfg.format = TableFormat::Csv;
      else if (f == "json") cfg.format = TableFormat::Json;
      else throw ValidationError("format must be csv or json");
    }
    if (j.contains("sim")) {
      const json& s = j.at("sim");
      if (!s.is_object()) throw ValidationError("sim must be an object");
      if (s.contains("n_paths")) cfg.sim.n_paths = s.at("n_paths").get<std::size_t>();
      cfg.sim.horizon = number_field(s, "horizon", cfg.sim.horizon);
      if (s.contains("grid_points")) cfg.sim.grid_points = s.at("grid_points").get<std::size_t>();
      if (s.contains("master_seed")) cfg.sim.master_seed = s.at("master_seed").get<std::uint64_t>();
      if (s.contains("initial_sign_mode")) {
        cfg.sim.initial_sign_mode = sign_mode_from_string(s.at("initial_sign_mode"));
      }
      if (s.contains("workers")) cfg.sim.workers = s.at("workers").get<unsigned>();
    }
    if (j.contains("process")) cfg.process = spec_from_json(j.at("process"));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str());
}

ReferenceDrifts fig2_reference_drifts(double epsilon, double lambda, double t) {
  const double e = epsilon;
  const double scale = lambda * t;
  return {-2.0 * e * scale, -(8.0 * e + 15.0 * e * e) / 16.0 * scale,
          (36.0 - 833.0 * e - 340.0 * e * e) / 640.0 * scale};
}

double fig2_reference_epsilon_star() {
  const double a = 340.0, b = 833.0, c = -36.0;
  return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

double fig2_epsilon_star() {
  return bisect([](double e) { return drift_ab(presets::fig2(e), 1.0); }, 0.0, 0.5);
}

double fig3_r_star() {
  return bisect([](double r) { return drift_ab(presets::fig3(r), 1.0); }, 0.0, 0.5);
}

ExperimentReport run_fig1(const ExperimentConfig& config) {
  return run_triplet("fig1", presets::fig1(), config, json::object());
}

ExperimentReport run_fig2(const ExperimentConfig& config) {
  config.validate();
  const MixedSpec m = presets::fig2(config.epsilon);
  const ReferenceDrifts ref = fig2_reference_drifts(config.epsilon, m.lambda(), 1.0);
  json summary = json::object();
  summary["epsilon"] = config.epsilon;
  summary["reference_polynomials"] = {
      {"mu_a", "-2 eps lambda t"},
      {"mu_b", "-(8 eps + 15 eps^2)/16 lambda t"},
      {"mu_ab", "(36 - 833 eps - 340 eps^2)/640 lambda t"},
      {"mu_a_at_1", ref.mu_a},
      {"mu_b_at_1", ref.mu_b},
      {"mu_ab_at_1", ref.mu_ab}};
  summary["epsilon_star_reference"] = fig2_reference_epsilon_star();
  summary["epsilon_star"] = fig2_epsilon_star();
  summary["exact_minus_reference_mu_ab_at_1"] = drift_ab(m, 1.0) - ref.mu_ab;
  return run_triplet("fig2", m, config, std::move(summary));
}

ExperimentReport run_fig3(const ExperimentConfig& config) {
  config.validate();
  OutputSink sink(config.output_dir, config.format);
  ExperimentReport report;
  const SimConfig& sim = config.sim;
  const std::vector<double> rs = config.r_values.empty() ? default_fig3_r() : config.r_values;

  json summary = json::object();
  summary["experiment"] = "fig3";
  summary["parameters"] = spec_to_json(presets::fig3(0.5));
  summary["sim"] = sim_to_json(sim);
  summary["drift_polynomial"] = "(1 - r)(1638 r - 83)/8000 lambda t";
  summary["r_star"] = fig3_r_star();
  summary["r_star_reference"] = 83.0 / 1638.0;
  summary["analytic_mu_a_at_1"] = drift_a(presets::fig3(0.0).memoryless(), 1.0);
  summary["analytic_mu_b_at_1"] = drift_b(presets::fig3(0.0).memory(), 1.0);

  Table drifts{{"r", "analytic", "mc", "std_error"}, {}};
  json per_r = json::array();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const MixedSpec m = presets::fig3(rs[i]);
    const Path path = simulate_path(m, sim.horizon, sim.initial_sign_mode, sim.master_seed, i);
    sink.table("fig3_path_AB_r" + format_number(rs[i]), path_table(path));

    const EnsembleStats stats = simulate_ensemble(m, sim);
    const double analytic = drift_ab(m, sim.horizon);
    drifts.rows.push_back({rs[i], analytic, stats.mean.back(), stats.std_error.back()});
    report.checks.push_back(make_check("mu_AB(r=" + format_number(rs[i]) + ")", sim.horizon,
                                       analytic, stats.mean.back(), stats.std_error.back()));
    const SignFraction sf = sign_fraction_from(stats);
    report.checks.push_back(make_check("positive_fraction_AB(r=" + format_number(rs[i]) + ")",
                                       sim.horizon, alpha(m), sf.fraction, sf.std_error));
    per_r.push_back({{"r", rs[i]},
                     {"analytic", analytic},
                     {"mc_mean", stats.mean.back()},
                     {"std_error", stats.std_error.back()},
                     {"alpha", alpha(m)}});
  }
  sink.table("fig3_drifts", drifts);
  summary["per_r"] = per_r;
  finish(report, summary, sink, "fig3_summary");
  return report;
}

ExperimentReport run_sweep(const ExperimentConfig& config) {
  config.validate();
  MixedSpec base = presets::fig1();
  bool base_is_fig1 = true;
  if (config.process) {
    const auto* mixed = std::get_if<MixedSpec>(&*config.process);
    if (!mixed) throw ValidationError("sweep requires an AB process");
    base = *mixed;
    base_is_fig1 = base == presets::fig1();
  }
  OutputSink sink(config.output_dir, config.format);
  ExperimentReport report;
  const SimConfig& sim = config.sim;
  const double horizon = sim.horizon;
  const std::vector<double> rs = config.r_values.empty() ? uniform_grid(0.0, 1.0, 100) : config.r_values;
  const std::vector<double> eps =
      config.epsilon_values.empty() ? uniform_grid(0.0, 0.05, 10) : config.epsilon_values;

  SimConfig final_only = sim;
  final_only.grid_points = 2;

  Table r_table{{"r", "analytic", "mc", "std_error"}, {}};
  std::size_t best_analytic = 0, best_mc = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const MixedSpec m = base.with_r(rs[i]);
    const double analytic = drift_ab(m, horizon);
    const EnsembleStats stats = simulate_ensemble(m, final_only);
    r_table.rows.push_back({rs[i], analytic, stats.mean.back(), stats.std_error.back()});
    report.checks.push_back(make_check("mu_AB(r=" + format_number(rs[i]) + ")", horizon,
                                       analytic, stats.mean.back(), stats.std_error.back()));
    if (analytic > r_table.rows[best_analytic][1]) best_analytic = i;
    if (stats.mean.back() > r_table.rows[best_mc][2]) best_mc = i;
  }
  sink.table("sweep_r", r_table);

  Table e_table{{"epsilon", "mu_a", "mu_b", "mu_ab", "mu_ab_reference", "mc", "std_error"}, {}};
  for (double e : eps) {
    const MixedSpec m = perturbed(base, e);
    const EnsembleStats stats = simulate_ensemble(m, final_only);
    const double reference =
        base_is_fig1 ? fig2_reference_drifts(e, m.lambda(), horizon).mu_ab : NAN;
    e_table.rows.push_back({e, drift_a(m.memoryless(), horizon), drift_b(m.memory(), horizon),
                            drift_ab(m, horizon), reference, stats.mean.back(),
                            stats.std_error.back()});
    report.checks.push_back(make_check("mu_AB(eps=" + format_number(e) + ")", horizon,
                                       drift_ab(m, horizon), stats.mean.back(),
                                       stats.std_error.back()));
  }
  sink.table("sweep_epsilon", e_table);

  const CriticalMixing crit = critical_mixing(base.law_pos().q(), base.law_neg().q());
  json summary = json::object();
  summary["experiment"] = "sweep";
  summary["parameters"] = spec_to_json(base);
  summary["sim"] = sim_to_json(sim);
  summary["argmax_r_analytic"] = r_table.rows[best_analytic][0];
  summary["argmax_r_mc"] = r_table.rows[best_mc][0];
  summary["optimal_r"] = crit.optimal;
  summary["spurious_critical_r"] = number_or_null(crit.spurious);
  try {
    summary["drift_derivative_at_optimal_r"] = drift_derivative(base.with_r(crit.optimal), horizon);
  } catch (const PreconditionViolation&) {
    summary["drift_derivative_at_optimal_r"] = nullptr;  // A or B biased
  }
  finish(report, summary, sink, "sweep_summary");
  return report;
}

ExperimentReport run_simulate(const ExperimentConfig& config) {
  config.validate();
  const ProcessSpec spec = config.process ? *config.process : ProcessSpec(presets::fig1());
  OutputSink sink(config.output_dir, config.format);
  ExperimentReport report;
  const EnsembleStats stats = simulate_ensemble(spec, config.sim);

  Table t{{"t", "mc_mean", "variance", "std_error", "analytic"}, {}};
  for (std::size_t k = 0; k < stats.t_grid.size(); ++k) {
    t.rows.push_back({stats.t_grid[k], stats.mean[k], stats.variance[k], stats.std_error[k],
                      drift(spec, stats.t_grid[k])});
  }
  sink.table("simulate_ensemble", t);
  report.checks.push_back(make_check("mu_" + std::string(process_name(spec)), config.sim.horizon,
                                     drift(spec, config.sim.horizon), stats.mean.back(),
                                     stats.std_error.back()));

  json summary = json::object();
  summary["experiment"] = "simulate";
  summary["parameters"] = spec_to_json(spec);
  summary["sim"] = sim_to_json(config.sim);
  summary["total_jumps"] = stats.total_jumps;
  summary["positive_jump_fraction"] = stats.positive_jump_fraction;
  // Consecutive signs of B/AB are correlated when q1 != q2, so this pairing
  // is informational and not part of the self-check.
  summary["stationary_positive_probability"] = stationary_positive_probability(spec);
  finish(report, summary, sink, "simulate_summary");
  return report;
}

std::string analytic_report(const ProcessSpec& spec, TableFormat format) {
  json j = json::object();
  j["process"] = spec_to_json(spec);
  j["drift_rate"] = drift_rate(spec);
  j["stationary_positive_probability"] = stationary_positive_probability(spec);
  j["mean_laplace_at_s_1"] = mean_laplace(spec, 1.0).real();

  if (const auto* b = std::get_if<SignMemorySpec>(&spec)) {
    j["mu1"] = b->law_pos().mean();
    j["mu2"] = b->law_neg().mean();
    j["beta"] = beta(*b);
  }
  if (const auto* m = std::get_if<MixedSpec>(&spec)) {
    const double r = m->r();
    const double mu_a = drift_a(m->memoryless(), 1.0);
    const double mu_b = drift_b(m->memory(), 1.0);
    j["mu0"] = m->a_law().mean();
    j["mu1"] = m->law_pos().mean();
    j["mu2"] = m->law_neg().mean();
    j["alpha"] = alpha(*m);
    j["beta"] = beta(m->memory());
    j["drift_rate_a"] = mu_a;
    j["drift_rate_b"] = mu_b;
    j["superposition_rate"] = r * mu_a + (1.0 - r) * mu_b;
    const CriticalMixing crit = critical_mixing(m->law_pos().q(), m->law_neg().q());
    j["optimal_r"] = crit.optimal;
    j["spurious_critical_r"] = number_or_null(crit.spurious);
    const MixedSpec base = *m;
    json roots = json::array();
    for (double root : sign_changes([&](double x) { return drift_ab(base.with_r(x), 1.0); })) {
      roots.push_back(root);
    }
    j["drift_sign_change_r"] = roots;
    try {
      j["drift_derivative_rate"] = drift_derivative(*m, 1.0);
    } catch (const PreconditionViolation&) {
      j["drift_derivative_rate"] = nullptr;
    }
  }

  if (format == TableFormat::Json) return j.dump(2) + "\n";
  std::ostringstream out;
  out << "key,value\n";
  for (const auto& [key, value] : j.items()) {
    if (value.is_number()) out << key << ',' << format_number(value.get<double>()) << '\n';
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        out << key << '[' << i << "]," << format_number(value[i].get<double>()) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace ctrw
