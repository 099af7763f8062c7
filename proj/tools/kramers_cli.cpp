// kramers: command-line driver for the simulation / estimation library.
//
// Subcommands: simulate, estimate, sweep, figure1, gamma-diagnostic.
// Exit codes: 0 success, 1 configuration error, 2 divergence, 3 identifiability.

#include "kramers/kramers.h"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitIdentifiability = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(kramers_status status) {
  switch (status) {
  case KRAMERS_OK: return kExitOk;
  case KRAMERS_ERR_DIVERGENCE: return kExitDivergence;
  case KRAMERS_ERR_IDENTIFIABILITY: return kExitIdentifiability;
  default: return kExitConfig;
  }
}

void check(kramers_status status, const std::string& context) {
  if (status != KRAMERS_OK)
    throw Failure{exit_code_for(status), context + ": " + kramers_status_string(status) + ": " + kramers_last_error()};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ModelPtr = std::unique_ptr<kramers_model, Deleter<kramers_model, kramers_model_destroy>>;
using TrajectoryPtr = std::unique_ptr<kramers_trajectory, Deleter<kramers_trajectory, kramers_trajectory_destroy>>;
using CurvePtr = std::unique_ptr<kramers_curve, Deleter<kramers_curve, kramers_curve_destroy>>;
using SweepPtr = std::unique_ptr<kramers_sweep_result, Deleter<kramers_sweep_result, kramers_sweep_destroy>>;

std::string fmt(double v, int precision = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

fs::path default_output_dir() {
  if (const char* env = std::getenv("KRAMERS_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

fs::path prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kExitConfig, "cannot create output directory " + dir.string() + ": " + ec.message()};
  return dir;
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) prepare_dir(file.parent_path());
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Failure{kExitConfig, "cannot write " + tmp.string()};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Failure{kExitConfig, "cannot move output into place at " + path.string()};
}

ModelPtr make_model(const std::string& id, double slope, double offset) {
  kramers_model* m = nullptr;
  if (id == "colloidal")
    check(kramers_model_create_colloidal(&m), "model");
  else if (id == "ou")
    check(kramers_model_create_ou(&m), "model");
  else if (id == "zero-drift")
    check(kramers_model_create_zero_drift(&m), "model");
  else if (id == "affine")
    check(kramers_model_create_affine(slope, offset, &m), "model");
  else
    throw Failure{kExitConfig, "model: unknown model '" + id + "'"};
  return ModelPtr(m);
}

kramers_scheme parse_scheme(const std::string& s) {
  return s == "euler-maruyama" ? KRAMERS_SCHEME_EULER_MARUYAMA : KRAMERS_SCHEME_EXPONENTIAL_VELOCITY;
}

struct ConfigEntry {
  int line;
  std::string key;
  std::string value;
};

// Flat `key = value` file; `#` / `;` comments and `[section]` headers are
// ignored. Keys are long option names without the leading dashes.
std::vector<ConfigEntry> read_config(const CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitConfig, "config: cannot open '" + path + "'"};
  std::vector<ConfigEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';' || line[first] == '[') continue;
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Failure{kExitConfig, where + "expected 'key = value'"};
    std::string key = line.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key.empty()) throw Failure{kExitConfig, where + "missing key"};
    if (key == "config" || !app.get_option_no_throw("--" + key))
      throw Failure{kExitConfig, where + "unknown key '" + key + "'"};
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (value.empty()) throw Failure{kExitConfig, where + "key '" + key + "' has no value"};
    entries.push_back({lineno, key, value});
  }
  return entries;
}

// Config values fill options that were not given on the command line.
void apply_config(CLI::App& app, const std::string& path) {
  for (const ConfigEntry& e : read_config(app, path)) {
    CLI::Option* opt = app.get_option("--" + e.key);
    if (opt->count() > 0) continue;
    try {
      if (opt->get_expected_max() > 1) {
        std::stringstream items(e.value);
        std::string item;
        while (std::getline(items, item, ',')) opt->add_result(item);
      } else {
        opt->add_result(e.value);
      }
      opt->run_callback();
    } catch (const CLI::Error& err) {
      throw Failure{kExitConfig, path + ":" + std::to_string(e.line) + ": key '" + e.key + "': " + err.what()};
    }
  }
}

std::string* add_config(CLI::App* sub, std::map<CLI::App*, std::string>& configs) {
  std::string& path = configs[sub];
  sub->add_option("--config", path, "Flat key = value file with option defaults; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  return &path;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string model = "colloidal";
  std::string mode = "underdamped";
  std::string scheme = "exponential-velocity";
  double slope = 1.0, offset = 0.0;
  double mu = 1e-3, gamma = 1.0 / 6.0, sigma = 10.0, theta = 0.02, x0 = 0.0, v0 = 0.0;
  std::size_t n = 1000;
  double dt = 0.01;
  std::size_t substeps = 10;
  std::uint64_t seed = 1, stream = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  ModelPtr model = make_model(a.model, a.slope, a.offset);
  const kramers_system_params params{a.mu, a.gamma, a.sigma, a.x0, a.v0};
  const kramers_grid_spec grid{a.n, a.dt, a.substeps};
  const kramers_mode mode = a.mode == "overdamped" ? KRAMERS_MODE_OVERDAMPED : KRAMERS_MODE_UNDERDAMPED;
  kramers_trajectory* raw = nullptr;
  check(kramers_simulate(model.get(), a.theta, &params, &grid, parse_scheme(a.scheme), mode, a.seed, a.stream, &raw),
        "simulate");
  TrajectoryPtr traj(raw);

  const fs::path out = a.out.empty() ? prepare_dir(default_output_dir()) / "trajectory.csv" : fs::path(a.out);
  ensure_parent(out);
  check(kramers_trajectory_write_csv(traj.get(), out.string().c_str()), "write trajectory");

  const std::size_t size = kramers_trajectory_size(traj.get());
  std::vector<double> xs(size);
  check(kramers_trajectory_copy(traj.get(), nullptr, xs.data(), nullptr, size), "trajectory");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "rows: " << size << "\n"
            << "final position: " << fmt(xs.back()) << "\n"
            << "runtime: " << fmt(secs, 4) << " s\n"
            << "wrote " << out.string() << "\n";
  return kExitOk;
}

struct EstimateArgs {
  std::string trajectory;
  std::string model = "colloidal";
  double slope = 1.0, offset = 0.0;
  double gamma = 1.0 / 6.0;
  double lo = 0.0, hi = 0.1;
  std::string method = "golden";
  double tol = 1e-10;
  std::string curve;
  double curve_lo = 0.0, curve_hi = 0.04;
  int curve_points = 401;
};

int run_estimate(const EstimateArgs& a) {
  if (a.trajectory.empty()) throw Failure{kExitConfig, "trajectory: --trajectory is required"};
  ModelPtr model = make_model(a.model, a.slope, a.offset);
  kramers_trajectory* raw = nullptr;
  check(kramers_trajectory_read_csv(a.trajectory.c_str(), &raw), "trajectory");
  TrajectoryPtr traj(raw);

  kramers_estimate est{};
  if (a.method == "closed-form")
    check(kramers_estimate_closed_form(traj.get(), model.get(), a.gamma, a.lo, a.hi, &est), "estimate");
  else
    check(kramers_estimate_golden(traj.get(), model.get(), a.gamma, a.lo, a.hi, a.tol, &est), "estimate");

  std::cout << "theta_hat: " << fmt(est.theta_hat) << "\n"
            << "objective: " << fmt(est.objective_at_min) << "\n"
            << "method: " << (est.method == KRAMERS_METHOD_CLOSED_FORM ? "closed-form" : "golden-section") << "\n"
            << "at_boundary: " << (est.at_boundary ? "true" : "false") << "\n";

  if (!a.curve.empty()) {
    kramers_curve* c = nullptr;
    check(kramers_curve_create(traj.get(), model.get(), a.gamma, a.curve_lo, a.curve_hi, a.curve_points, &c),
          "curve");
    CurvePtr curve(c);
    ensure_parent(a.curve);
    check(kramers_curve_write_csv(curve.get(), a.curve.c_str()), "write curve");
    std::cout << "wrote " << a.curve << "\n";
  }
  return kExitOk;
}

struct SweepArgs {
  std::string model = "ou";
  std::vector<double> mu{1e-1, 1e-2, 1e-3};
  std::vector<std::size_t> n{100, 1000, 10000};
  double delta = 10.0;
  std::size_t replicates = 20;
  std::uint64_t seed = 1;
  std::optional<double> theta, lo, hi, gamma, sigma;
  double x0 = 0.0, v0 = 0.0;
  std::size_t substeps = 10;
  std::string scheme = "exponential-velocity";
  bool no_diagnostics = false;
  int gap_points = 1001;
  unsigned threads = 0;
  std::string out_dir;
};

int run_sweep(const SweepArgs& a) {
  const kramers_model_id id = a.model == "colloidal" ? KRAMERS_MODEL_COLLOIDAL : KRAMERS_MODEL_OU;
  kramers_sweep_config cfg;
  kramers_sweep_default_config(id, &cfg);
  cfg.mu_values = a.mu.data();
  cfg.mu_count = a.mu.size();
  cfg.n_values = a.n.data();
  cfg.n_count = a.n.size();
  cfg.delta = a.delta;
  cfg.replicates = a.replicates;
  cfg.base_seed = a.seed;
  if (a.theta) cfg.theta_true = *a.theta;
  if (a.lo) cfg.lo = *a.lo;
  if (a.hi) cfg.hi = *a.hi;
  if (a.gamma) cfg.friction = *a.gamma;
  if (a.sigma) cfg.noise = *a.sigma;
  cfg.x0 = a.x0;
  cfg.v0 = a.v0;
  cfg.substeps = a.substeps;
  cfg.scheme = parse_scheme(a.scheme);
  cfg.diagnostics = a.no_diagnostics ? 0 : 1;
  cfg.gap_points = a.gap_points;
  cfg.threads = a.threads;

  kramers_sweep_result* raw = nullptr;
  check(kramers_sweep_run(&cfg, &raw), "sweep");
  SweepPtr result(raw);

  const fs::path dir = prepare_dir(a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir));
  check(kramers_sweep_write_csv(result.get(), (dir / "sweep.csv").string().c_str()), "write sweep");
  if (cfg.diagnostics)
    check(kramers_sweep_write_diagnostics_csv(result.get(), (dir / "sweep_diagnostics.csv").string().c_str()),
          "write diagnostics");

  std::ostringstream table;
  table << "model " << a.model << ", theta_true " << fmt(cfg.theta_true, 6) << ", T = " << fmt(cfg.delta, 6)
        << " * sqrt(n)\n";
  char line[160];
  std::snprintf(line, sizeof line, "%12s %8s %6s %6s %16s %16s\n", "mu", "n", "ok", "failed", "median|err|",
                "2*bootstrap_se");
  table << line;
  for (std::size_t i = 0; i < kramers_sweep_summary_count(result.get()); ++i) {
    kramers_sweep_summary_row s;
    check(kramers_sweep_summary_get(result.get(), i, &s), "summary");
    std::snprintf(line, sizeof line, "%12.4g %8zu %6zu %6zu %16.6g %16.6g\n", s.mu, s.n, s.ok, s.failed,
                  s.median_abs_error, 2.0 * s.bootstrap_se);
    table << line;
  }
  const std::size_t rows = kramers_sweep_row_count(result.get());
  const std::size_t failed = kramers_sweep_failure_count(result.get());
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string err = kramers_sweep_row_error(result.get(), i);
    if (!err.empty()) table << "failed row " << i << ": " << err << "\n";
  }
  write_text(dir / "sweep_summary.txt", table.str());
  std::cout << table.str() << "wrote " << (dir / "sweep.csv").string() << "\n";
  if (rows > 0 && failed == rows) {
    std::cerr << "error: every sweep cell failed\n";
    return kExitDivergence;
  }
  return kExitOk;
}

struct Figure1Args {
  std::uint64_t seed = 1;
  kramers_figure1_config cfg;
  std::string mode = "underdamped";
  std::string scheme = "exponential-velocity";
  std::string out_dir;
};

int run_figure1(Figure1Args a) {
  a.cfg.mode = a.mode == "overdamped" ? KRAMERS_MODE_OVERDAMPED : KRAMERS_MODE_UNDERDAMPED;
  a.cfg.scheme = parse_scheme(a.scheme);
  const auto start = std::chrono::steady_clock::now();
  kramers_trajectory* traj_raw = nullptr;
  kramers_curve* curve_raw = nullptr;
  kramers_estimate est{};
  check(kramers_figure1_run(&a.cfg, a.seed, &traj_raw, &curve_raw, &est), "figure1");
  TrajectoryPtr traj(traj_raw);
  CurvePtr curve(curve_raw);

  const fs::path dir = prepare_dir(a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir));
  check(kramers_trajectory_write_csv(traj.get(), (dir / "figure1_trajectory.csv").string().c_str()),
        "write trajectory");
  check(kramers_curve_write_csv(curve.get(), (dir / "figure1_curve.csv").string().c_str()), "write curve");
  std::ostringstream result;
  result << "seed=" << a.seed << " theta_true=" << fmt(a.cfg.theta_true) << " theta_hat=" << fmt(est.theta_hat)
         << " objective=" << fmt(est.objective_at_min) << " at_boundary=" << (est.at_boundary ? "true" : "false")
         << "\n";
  write_text(dir / "figure1_result.txt", result.str());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << result.str() << "runtime: " << fmt(secs, 4) << " s\n"
            << "wrote " << (dir / "figure1_trajectory.csv").string() << ", " << (dir / "figure1_curve.csv").string()
            << ", " << (dir / "figure1_result.txt").string() << "\n";
  return kExitOk;
}

struct GammaArgs {
  std::vector<double> mu{1e-1, 1e-2, 1e-3};
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  kramers_gamma_config cfg;
  std::string scheme = "exponential-velocity";
  std::string out_dir;
};

int run_gamma(GammaArgs a) {
  a.cfg.scheme = parse_scheme(a.scheme);
  std::vector<kramers_gamma_row> rows(a.mu.size());
  check(kramers_gamma_diagnostic_run(&a.cfg, a.mu.data(), a.mu.size(), a.n, a.seed, rows.data()), "gamma-diagnostic");
  const fs::path dir = prepare_dir(a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir));
  const fs::path out = dir / "gamma_diagnostic.csv";
  check(kramers_gamma_write_csv(rows.data(), rows.size(), out.string().c_str()), "write gamma diagnostic");
  char line[128];
  std::snprintf(line, sizeof line, "%12s %20s %20s\n", "mu", "uniform_gap", "sup_distance");
  std::cout << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%12.4g %20.10g %20.10g\n", r.mu, r.uniform_gap, r.sup_distance);
    std::cout << line;
  }
  std::cout << "wrote " << out.string() << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underdamped/overdamped Langevin simulation and least-squares drift estimation"};
  std::map<CLI::App*, std::string> configs;
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kramers_version()));

  const std::vector<std::string> models{"colloidal", "ou", "zero-drift", "affine"};
  const std::vector<std::string> schemes{"exponential-velocity", "euler-maruyama"};
  const std::vector<std::string> modes{"underdamped", "overdamped"};

  // simulate
  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate the underdamped or overdamped equation, write a trajectory CSV");
  add_config(simulate, configs);
  simulate->add_option("--model", sim.model, "Drift model")->check(CLI::IsMember(models))->capture_default_str();
  simulate->add_option("--mode", sim.mode, "Equation to integrate")->check(CLI::IsMember(modes))->capture_default_str();
  simulate->add_option("--scheme", sim.scheme, "Underdamped integrator")->check(CLI::IsMember(schemes))->capture_default_str();
  simulate->add_option("--slope", sim.slope, "Affine model: b = theta * slope + offset")->capture_default_str();
  simulate->add_option("--offset", sim.offset, "Affine model offset")->capture_default_str();
  simulate->add_option("--mu", sim.mu, "Mass (> 0)")->capture_default_str();
  simulate->add_option("--gamma", sim.gamma, "Friction (> 0)")->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "Noise amplitude (>= 0)")->capture_default_str();
  simulate->add_option("--theta", sim.theta, "Drift parameter")->capture_default_str();
  simulate->add_option("--x0", sim.x0, "Initial position")->capture_default_str();
  simulate->add_option("--v0", sim.v0, "Initial velocity")->capture_default_str();
  simulate->add_option("--n", sim.n, "Observation intervals")->capture_default_str();
  simulate->add_option("--dt", sim.dt, "Observation interval width")->capture_default_str();
  simulate->add_option("--substeps", sim.substeps, "Integrator steps per observation interval")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  simulate->add_option("--stream", sim.stream, "Noise substream")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output CSV (default $KRAMERS_OUTPUT_DIR/trajectory.csv)");

  // estimate
  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Minimize the least-squares drift objective on a trajectory CSV");
  add_config(estimate, configs);
  estimate->add_option("--trajectory", est.trajectory, "Trajectory CSV (t,x[,v]); required");
  estimate->add_option("--model", est.model, "Drift model")->check(CLI::IsMember(models))->capture_default_str();
  estimate->add_option("--slope", est.slope, "Affine model slope")->capture_default_str();
  estimate->add_option("--offset", est.offset, "Affine model offset")->capture_default_str();
  estimate->add_option("--gamma", est.gamma, "Friction (> 0)")->capture_default_str();
  estimate->add_option("--lo", est.lo, "Parameter space lower bound")->capture_default_str();
  estimate->add_option("--hi", est.hi, "Parameter space upper bound")->capture_default_str();
  estimate->add_option("--method", est.method, "golden or closed-form")
      ->check(CLI::IsMember({"golden", "closed-form"}))
      ->capture_default_str();
  estimate->add_option("--tol", est.tol, "Golden-section bracket tolerance")->capture_default_str();
  estimate->add_option("--curve", est.curve, "Also write the objective curve CSV (theta,objective)");
  estimate->add_option("--curve-lo", est.curve_lo, "Curve theta start")->capture_default_str();
  estimate->add_option("--curve-hi", est.curve_hi, "Curve theta end")->capture_default_str();
  estimate->add_option("--curve-points", est.curve_points, "Curve resolution")->capture_default_str();

  // sweep
  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Consistency sweep over masses and sample sizes");
  add_config(sweep, configs);
  sweep->add_option("--model", sw.model, "ou or colloidal")->check(CLI::IsMember({"ou", "colloidal"}))->capture_default_str();
  sweep->add_option("--mu", sw.mu, "Masses")->delimiter(',')->capture_default_str();
  sweep->add_option("--n", sw.n, "Sample sizes")->delimiter(',')->capture_default_str();
  sweep->add_option("--delta", sw.delta, "Horizon constant: T = delta * sqrt(n)")->capture_default_str();
  sweep->add_option("--replicates", sw.replicates, "Replicates per cell")->capture_default_str();
  sweep->add_option("--seed", sw.seed, "Base seed")->capture_default_str();
  sweep->add_option("--theta", sw.theta, "True drift parameter (model default)");
  sweep->add_option("--lo", sw.lo, "Parameter space lower bound (model default)");
  sweep->add_option("--hi", sw.hi, "Parameter space upper bound (model default)");
  sweep->add_option("--gamma", sw.gamma, "Friction (model default)");
  sweep->add_option("--sigma", sw.sigma, "Noise amplitude (model default)");
  sweep->add_option("--x0", sw.x0, "Initial position")->capture_default_str();
  sweep->add_option("--v0", sw.v0, "Initial velocity")->capture_default_str();
  sweep->add_option("--substeps", sw.substeps, "Integrator steps per observation interval")->capture_default_str();
  sweep->add_option("--scheme", sw.scheme, "Underdamped integrator")->check(CLI::IsMember(schemes))->capture_default_str();
  sweep->add_flag("--no-diagnostics", sw.no_diagnostics, "Skip the coupled small-mass diagnostics");
  sweep->add_option("--gap-points", sw.gap_points, "Theta grid for the objective gap")->capture_default_str();
  sweep->add_option("--threads", sw.threads, "Worker threads (0: all)")->capture_default_str();
  sweep->add_option("--out-dir", sw.out_dir, "Output directory (default $KRAMERS_OUTPUT_DIR or .)");

  // figure1
  Figure1Args f1;
  kramers_figure1_default_config(&f1.cfg);
  auto* figure1 = app.add_subcommand("figure1", "Colloidal-particle reproduction run: trajectory, objective curve, estimate");
  add_config(figure1, configs);
  figure1->add_option("--seed", f1.seed, "Noise seed")->capture_default_str();
  figure1->add_option("--mu", f1.cfg.mass, "Mass")->capture_default_str();
  figure1->add_option("--gamma", f1.cfg.friction, "Friction")->capture_default_str();
  figure1->add_option("--sigma", f1.cfg.noise, "Noise amplitude")->capture_default_str();
  figure1->add_option("--theta", f1.cfg.theta_true, "True prefactor")->capture_default_str();
  figure1->add_option("--v0", f1.cfg.v0, "Initial velocity")->capture_default_str();
  figure1->add_option("--n", f1.cfg.n, "Observation intervals")->capture_default_str();
  figure1->add_option("--dt", f1.cfg.dt, "Observation interval width")->capture_default_str();
  figure1->add_option("--substeps", f1.cfg.substeps, "Integrator steps per observation interval")->capture_default_str();
  figure1->add_option("--mode", f1.mode, "Equation generating the data")->check(CLI::IsMember(modes))->capture_default_str();
  figure1->add_option("--scheme", f1.scheme, "Underdamped integrator")->check(CLI::IsMember(schemes))->capture_default_str();
  figure1->add_option("--lo", f1.cfg.lo, "Parameter space lower bound")->capture_default_str();
  figure1->add_option("--hi", f1.cfg.hi, "Parameter space upper bound")->capture_default_str();
  figure1->add_option("--tol", f1.cfg.tol, "Golden-section tolerance")->capture_default_str();
  figure1->add_option("--curve-lo", f1.cfg.curve_lo, "Curve theta start")->capture_default_str();
  figure1->add_option("--curve-hi", f1.cfg.curve_hi, "Curve theta end")->capture_default_str();
  figure1->add_option("--curve-points", f1.cfg.curve_points, "Curve resolution")->capture_default_str();
  figure1->add_option("--out-dir", f1.out_dir, "Output directory (default $KRAMERS_OUTPUT_DIR or .)");

  // gamma-diagnostic
  GammaArgs gd;
  kramers_gamma_default_config(&gd.cfg);
  auto* gamma = app.add_subcommand("gamma-diagnostic", "Objective gap and path distance between coupled runs per mass");
  add_config(gamma, configs);
  gamma->add_option("--mu", gd.mu, "Masses")->delimiter(',')->capture_default_str();
  gamma->add_option("--n", gd.n, "Observation intervals")->capture_default_str();
  gamma->add_option("--seed", gd.seed, "Noise seed")->capture_default_str();
  gamma->add_option("--dt", gd.cfg.dt, "Observation interval width")->capture_default_str();
  gamma->add_option("--substeps", gd.cfg.substeps, "Integrator steps per observation interval")->capture_default_str();
  gamma->add_option("--gamma", gd.cfg.friction, "Friction")->capture_default_str();
  gamma->add_option("--sigma", gd.cfg.noise, "Noise amplitude")->capture_default_str();
  gamma->add_option("--theta", gd.cfg.theta_true, "True prefactor")->capture_default_str();
  gamma->add_option("--lo", gd.cfg.lo, "Parameter space lower bound")->capture_default_str();
  gamma->add_option("--hi", gd.cfg.hi, "Parameter space upper bound")->capture_default_str();
  gamma->add_option("--gap-points", gd.cfg.gap_points, "Theta grid for the objective gap")->capture_default_str();
  gamma->add_option("--scheme", gd.scheme, "Underdamped integrator")->check(CLI::IsMember(schemes))->capture_default_str();
  gamma->add_option("--out-dir", gd.out_dir, "Output directory (default $KRAMERS_OUTPUT_DIR or .)");

  try {
    app.parse(argc, argv);
    for (auto& [sub, path] : configs)
      if (*sub && !path.empty()) apply_config(*sub, path);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*sweep) return run_sweep(sw);
    if (*figure1) return run_figure1(f1);
    if (*gamma) return run_gamma(gd);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
