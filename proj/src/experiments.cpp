#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <thread>

namespace kramers {

const char* to_string(ModelId id) {
  switch (id) {
  case ModelId::Colloidal: return "colloidal";
  case ModelId::OU: return "ou";
  }
  return "unknown";
}

DriftModel make_model(ModelId id) { return id == ModelId::Colloidal ? colloidal_model() : ou_model(); }

Figure1Result run_figure1(std::uint64_t seed, const Figure1Config& cfg) {
  const DriftModel model = colloidal_model();
  SystemParams params;
  params.mass = cfg.mass;
  params.friction = cfg.friction;
  params.noise = cfg.noise;
  params.x0 = {cfg.x0};
  params.v0 = {cfg.v0};
  params.validate();
  cfg.space.validate();

  const ObservationGrid grid = ObservationGrid::uniform(cfg.n, cfg.dt, cfg.substeps);
  const NoisePath noise = make_noise_path(seed, 0, grid);
  const IntegratorSpec spec{cfg.scheme};
  Trajectory traj = cfg.mode == SimulationMode::Underdamped
                        ? simulate_underdamped(model, cfg.theta_true, params, grid, spec, noise)
                        : simulate_overdamped(model, cfg.theta_true, params, grid, spec, noise);

  auto curve = objective_curve(traj, model, cfg.friction, cfg.curve_lo, cfg.curve_hi, cfg.curve_points);
  const EstimationResult est = minimize_golden(traj, model, cfg.friction, cfg.space, cfg.tol);
  return Figure1Result{std::move(traj), std::move(curve), est};
}

// ---------------------------------------------------------------------------

SweepConfig SweepConfig::defaults_for(ModelId id) {
  SweepConfig cfg;
  cfg.model_id = id;
  if (id == ModelId::Colloidal) {
    cfg.theta_true = 0.02;
    cfg.space = {0.0, 0.1};
    cfg.friction = 1.0 / 6.0;
    cfg.noise = 10.0;
  }
  return cfg;
}

void SweepConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, what); };
  if (mu_values.empty()) bad("mu_values must not be empty");
  for (double mu : mu_values)
    if (!(mu > 0.0) || !std::isfinite(mu)) bad("mu_values: every mass must be a finite value > 0");
  if (n_values.empty()) bad("n_values must not be empty");
  for (std::size_t n : n_values)
    if (n < 2) bad("n_values: every n must be >= 2");
  if (!(delta > 0.0) || !std::isfinite(delta)) bad("delta must be a finite value > 0");
  if (replicates < 1) bad("replicates must be >= 1");
  if (replicates >= (std::size_t{1} << 32)) bad("replicates must be below 2^32");
  if (n_values.size() >= (std::size_t{1} << 31)) bad("too many n values");
  if (!(friction > 0.0)) bad("gamma must be > 0");
  if (!(noise >= 0.0)) bad("sigma must be >= 0");
  if (substeps < 1) bad("substeps must be >= 1");
  if (gap_points < 2) bad("gap_points must be >= 2");
  space.validate();
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok(); }));
}

std::uint64_t sweep_stream_id(std::size_t n_index, std::size_t replicate) {
  return (static_cast<std::uint64_t>(n_index) << 32) | static_cast<std::uint64_t>(replicate);
}

namespace {

EstimationResult estimate_theta(const Trajectory& traj, const DriftModel& model, double friction,
                                const ParameterSpace& space) {
  if (model.has_linear_decomposition()) return minimize_closed_form(traj, model, friction, space);
  return minimize_golden(traj, model, friction, space, 1e-10);
}

template <typename Task>
void run_parallel(std::size_t count, unsigned threads, Task task) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
}

} // namespace

SweepResult run_consistency_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const DriftModel model = make_model(cfg.model_id);
  const std::size_t n_mu = cfg.mu_values.size();
  const std::size_t n_n = cfg.n_values.size();
  const std::size_t cells = n_mu * n_n * cfg.replicates;

  auto params_for = [&](double mu) {
    SystemParams p;
    p.mass = mu;
    p.friction = cfg.friction;
    p.noise = cfg.noise;
    p.x0 = {cfg.x0};
    p.v0 = {cfg.v0};
    return p;
  };
  auto grid_for = [&](std::size_t n) {
    const double horizon = cfg.delta * std::sqrt(static_cast<double>(n));
    return ObservationGrid::uniform(n, horizon / static_cast<double>(n), cfg.substeps);
  };

  SweepResult result;
  result.rows.resize(cells);
  run_parallel(cells, cfg.threads, [&](std::size_t cell) {
    const std::size_t i = cell / (n_n * cfg.replicates);
    const std::size_t j = (cell / cfg.replicates) % n_n;
    const std::size_t r = cell % cfg.replicates;
    SweepRow& row = result.rows[cell];
    row.mu = cfg.mu_values[i];
    row.n = cfg.n_values[j];
    row.replicate = r;
    try {
      const ObservationGrid grid = grid_for(row.n);
      const NoisePath noise = make_noise_path(cfg.base_seed, sweep_stream_id(j, r), grid);
      const Trajectory traj =
          simulate_underdamped(model, cfg.theta_true, params_for(row.mu), grid, IntegratorSpec{cfg.scheme}, noise);
      const EstimationResult est = estimate_theta(traj, model, cfg.friction, cfg.space);
      row.theta_hat = est.theta_hat;
      row.abs_error = std::abs(est.theta_hat - cfg.theta_true);
    } catch (const std::exception& e) {
      row.theta_hat = std::nan("");
      row.abs_error = std::nan("");
      row.error = e.what();
    }
  });

  if (cfg.diagnostics) {
    result.diagnostics.resize(n_mu * n_n);
    run_parallel(n_mu * n_n, cfg.threads, [&](std::size_t cell) {
      const std::size_t i = cell / n_n;
      const std::size_t j = cell % n_n;
      SweepDiagnostic& d = result.diagnostics[cell];
      d.mu = cfg.mu_values[i];
      d.n = cfg.n_values[j];
      try {
        const ObservationGrid grid = grid_for(d.n);
        const NoisePath noise = make_noise_path(cfg.base_seed, sweep_stream_id(j, 0), grid);
        const GammaRow g = gamma_diagnostic_point(model, cfg.theta_true, params_for(d.mu), grid,
                                                  IntegratorSpec{cfg.scheme}, noise, cfg.space, cfg.gap_points);
        d.sup_distance = g.sup_distance;
        d.uniform_gap = g.uniform_gap;
      } catch (const std::exception& e) {
        d.sup_distance = std::nan("");
        d.uniform_gap = std::nan("");
        d.error = e.what();
      }
    });
  }
  return result;
}

std::vector<SweepSummaryRow> summarize_sweep(const SweepResult& result, std::size_t resamples, std::uint64_t seed) {
  // Rows are already grouped by (mu, n); keep first-appearance order.
  std::vector<std::pair<double, std::size_t>> keys;
  std::map<std::pair<double, std::size_t>, std::vector<double>> errors;
  std::map<std::pair<double, std::size_t>, std::size_t> failed;
  for (const SweepRow& row : result.rows) {
    const auto key = std::make_pair(row.mu, row.n);
    if (!errors.contains(key) && !failed.contains(key)) keys.push_back(key);
    if (row.ok())
      errors[key].push_back(row.abs_error);
    else
      ++failed[key];
  }

  auto median = [](std::vector<double> v) {
    if (v.empty()) return std::nan("");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
    return m;
  };

  std::mt19937_64 rng(seed);
  std::vector<SweepSummaryRow> out;
  for (const auto& key : keys) {
    const std::vector<double>& e = errors[key];
    SweepSummaryRow s;
    s.mu = key.first;
    s.n = key.second;
    s.ok = e.size();
    s.failed = failed[key];
    s.median_abs_error = median(e);
    if (e.size() > 1 && resamples > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, e.size() - 1);
      std::vector<double> medians(resamples);
      std::vector<double> sample(e.size());
      for (double& m : medians) {
        for (double& x : sample) x = e[pick(rng)];
        m = median(sample);
      }
      double mean = 0.0;
      for (double m : medians) mean += m;
      mean /= static_cast<double>(resamples);
      double var = 0.0;
      for (double m : medians) var += (m - mean) * (m - mean);
      s.bootstrap_se = std::sqrt(var / static_cast<double>(resamples - 1));
    }
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

GammaRow gamma_diagnostic_point(const DriftModel& model, double theta, const SystemParams& params,
                                const ObservationGrid& grid, const IntegratorSpec& spec, const NoisePath& noise,
                                const ParameterSpace& space, int gap_points) {
  const CoupledRunResult run = simulate_coupled(model, theta, params, grid, spec, noise);
  GammaRow row;
  row.mu = params.mass;
  row.sup_distance = run.sup_distance;
  row.uniform_gap = uniform_objective_gap(run.underdamped, run.overdamped, model, params.friction, space, gap_points);
  return row;
}

std::vector<GammaRow> run_gamma_diagnostic(std::span<const double> mu_values, std::size_t n, std::uint64_t seed,
                                           const GammaDiagnosticConfig& cfg) {
  if (mu_values.empty()) throw Error(ErrorKind::InvalidInput, "mu_values must not be empty");
  const DriftModel model = colloidal_model();
  const ObservationGrid grid = ObservationGrid::uniform(n, cfg.dt, cfg.substeps);
  const NoisePath noise = make_noise_path(seed, 0, grid);
  std::vector<GammaRow> rows;
  for (double mu : mu_values) {
    SystemParams params;
    params.mass = mu;
    params.friction = cfg.friction;
    params.noise = cfg.noise;
    params.x0 = {cfg.x0};
    params.v0 = {cfg.v0};
    rows.push_back(gamma_diagnostic_point(model, cfg.theta_true, params, grid, IntegratorSpec{cfg.scheme}, noise,
                                          cfg.space, cfg.gap_points));
  }
  return rows;
}

} // namespace kramers
