#include "kramers/kramers.h"

#include "core.hpp"
#include "csv_io.hpp"
#include "estimate.hpp"
#include "experiments.hpp"
#include "simulate.hpp"

#include <exception>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

struct kramers_model {
  kramers::DriftModel model;
};

struct kramers_trajectory {
  kramers::Trajectory traj;
};

struct kramers_curve {
  std::vector<kramers::CurvePoint> points;
};

struct kramers_sweep_result {
  kramers::SweepResult result;
  std::vector<kramers::SweepSummaryRow> summary;
};

namespace {

thread_local std::string g_last_error;

kramers_status status_of(kramers::ErrorKind kind) {
  using kramers::ErrorKind;
  switch (kind) {
  case ErrorKind::InvalidInput: return KRAMERS_ERR_INVALID_ARGUMENT;
  case ErrorKind::Precondition: return KRAMERS_ERR_PRECONDITION;
  case ErrorKind::Divergence: return KRAMERS_ERR_DIVERGENCE;
  case ErrorKind::Identifiability: return KRAMERS_ERR_IDENTIFIABILITY;
  case ErrorKind::ModelEvaluation: return KRAMERS_ERR_MODEL_EVALUATION;
  case ErrorKind::Io: return KRAMERS_ERR_IO;
  }
  return KRAMERS_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
kramers_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    body();
    return KRAMERS_OK;
  } catch (const kramers::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KRAMERS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KRAMERS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KRAMERS_ERR_INTERNAL;
  }
}

template <typename T>
void require(const T* ptr, const char* name) {
  if (!ptr) throw kramers::Error(kramers::ErrorKind::InvalidInput, std::string(name) + " must not be NULL");
}

kramers::Scheme to_scheme(kramers_scheme s) {
  switch (s) {
  case KRAMERS_SCHEME_EXPONENTIAL_VELOCITY: return kramers::Scheme::ExponentialVelocity;
  case KRAMERS_SCHEME_EULER_MARUYAMA: return kramers::Scheme::EulerMaruyama;
  }
  throw kramers::Error(kramers::ErrorKind::InvalidInput, "unknown integration scheme");
}

kramers_scheme from_scheme(kramers::Scheme s) {
  return s == kramers::Scheme::EulerMaruyama ? KRAMERS_SCHEME_EULER_MARUYAMA : KRAMERS_SCHEME_EXPONENTIAL_VELOCITY;
}

kramers::SystemParams to_params(const kramers_system_params& p) {
  kramers::SystemParams out;
  out.mass = p.mass;
  out.friction = p.friction;
  out.noise = p.noise;
  out.x0 = {p.x0};
  out.v0 = {p.v0};
  return out;
}

kramers::ObservationGrid to_grid(const kramers_grid_spec& g) {
  return kramers::ObservationGrid::uniform(g.n, g.dt, g.substeps);
}

kramers_estimate to_c(const kramers::EstimationResult& r) {
  kramers_estimate out{};
  out.theta_hat = r.theta_hat;
  out.objective_at_min = r.objective_at_min;
  out.method = r.method == kramers::Method::ClosedForm ? KRAMERS_METHOD_CLOSED_FORM : KRAMERS_METHOD_GOLDEN_SECTION;
  out.at_boundary = r.at_boundary ? 1 : 0;
  out.evaluations = r.evaluations;
  return out;
}

template <typename Make>
kramers_status create_model(kramers_model** out, Make make) {
  return guarded([&] {
    require(out, "out");
    *out = new kramers_model{make()};
  });
}

} // namespace

extern "C" {

const char* kramers_last_error(void) { return g_last_error.c_str(); }

const char* kramers_status_string(kramers_status status) {
  switch (status) {
  case KRAMERS_OK: return "ok";
  case KRAMERS_ERR_INVALID_ARGUMENT: return "invalid argument";
  case KRAMERS_ERR_PRECONDITION: return "precondition violated";
  case KRAMERS_ERR_DIVERGENCE: return "divergence";
  case KRAMERS_ERR_IDENTIFIABILITY: return "not identifiable";
  case KRAMERS_ERR_MODEL_EVALUATION: return "model evaluation error";
  case KRAMERS_ERR_IO: return "i/o error";
  case KRAMERS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* kramers_version(void) { return "0.1.0"; }

// -- models ------------------------------------------------------------------

kramers_status kramers_model_create_colloidal(kramers_model** out) {
  return create_model(out, [] { return kramers::colloidal_model(); });
}

kramers_status kramers_model_create_ou(kramers_model** out) {
  return create_model(out, [] { return kramers::ou_model(); });
}

kramers_status kramers_model_create_affine(double slope, double offset, kramers_model** out) {
  return create_model(out, [=] { return kramers::affine_theta_model(slope, offset); });
}

kramers_status kramers_model_create_zero_drift(kramers_model** out) {
  return create_model(out, [] { return kramers::zero_drift_model(); });
}

void kramers_model_destroy(kramers_model* model) { delete model; }

kramers_status kramers_model_eval(const kramers_model* model, double x, double theta, double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    const double pos[1] = {x};
    *out = kramers::eval_drift(model->model, pos, theta)[0];
  });
}

int kramers_model_is_linear(const kramers_model* model) {
  return model && model->model.has_linear_decomposition() ? 1 : 0;
}

double kramers_colloidal_g_eff(void) { return kramers::ColloidalForce::default_g_eff(); }

// -- simulation ----------------------------------------------------------------

kramers_status kramers_simulate(const kramers_model* model, double theta, const kramers_system_params* params,
                                const kramers_grid_spec* grid, kramers_scheme scheme, kramers_mode mode,
                                uint64_t seed, uint64_t stream_id, kramers_trajectory** out) {
  return guarded([&] {
    require(model, "model");
    require(params, "params");
    require(grid, "grid");
    require(out, "out");
    const auto g = to_grid(*grid);
    const auto noise = kramers::make_noise_path(seed, stream_id, g);
    const kramers::IntegratorSpec spec{to_scheme(scheme)};
    const auto p = to_params(*params);
    if (mode == KRAMERS_MODE_UNDERDAMPED)
      *out = new kramers_trajectory{kramers::simulate_underdamped(model->model, theta, p, g, spec, noise)};
    else if (mode == KRAMERS_MODE_OVERDAMPED)
      *out = new kramers_trajectory{kramers::simulate_overdamped(model->model, theta, p, g, spec, noise)};
    else
      throw kramers::Error(kramers::ErrorKind::InvalidInput, "unknown simulation mode");
  });
}

kramers_status kramers_simulate_coupled(const kramers_model* model, double theta, const kramers_system_params* params,
                                        const kramers_grid_spec* grid, kramers_scheme scheme, uint64_t seed,
                                        uint64_t stream_id, kramers_trajectory** underdamped,
                                        kramers_trajectory** overdamped, double* sup_distance) {
  return guarded([&] {
    require(model, "model");
    require(params, "params");
    require(grid, "grid");
    const auto g = to_grid(*grid);
    const auto noise = kramers::make_noise_path(seed, stream_id, g);
    auto run = kramers::simulate_coupled(model->model, theta, to_params(*params), g,
                                         kramers::IntegratorSpec{to_scheme(scheme)}, noise);
    if (sup_distance) *sup_distance = run.sup_distance;
    if (underdamped) *underdamped = new kramers_trajectory{std::move(run.underdamped)};
    if (overdamped) *overdamped = new kramers_trajectory{std::move(run.overdamped)};
  });
}

kramers_status kramers_trajectory_create(const double* times, const double* positions, size_t count,
                                         kramers_trajectory** out) {
  return guarded([&] {
    require(times, "times");
    require(positions, "positions");
    require(out, "out");
    kramers::ObservationGrid grid(std::vector<double>(times, times + count), 1);
    *out = new kramers_trajectory{kramers::Trajectory(std::move(grid), 1, std::vector<double>(positions, positions + count))};
  });
}

void kramers_trajectory_destroy(kramers_trajectory* traj) { delete traj; }

size_t kramers_trajectory_size(const kramers_trajectory* traj) { return traj ? traj->traj.size() : 0; }

int kramers_trajectory_has_velocities(const kramers_trajectory* traj) {
  return traj && traj->traj.has_velocities() ? 1 : 0;
}

kramers_status kramers_trajectory_copy(const kramers_trajectory* traj, double* times, double* positions,
                                       double* velocities, size_t capacity) {
  return guarded([&] {
    require(traj, "traj");
    const auto& t = traj->traj;
    if (t.dim() != 1) throw kramers::Error(kramers::ErrorKind::Precondition, "only 1-D trajectories can be copied");
    if (velocities && !t.has_velocities())
      throw kramers::Error(kramers::ErrorKind::Precondition, "trajectory carries no velocities");
    const size_t count = std::min(capacity, t.size());
    for (size_t k = 0; k < count; ++k) {
      if (times) times[k] = t.grid().times()[k];
      if (positions) positions[k] = t.position(k)[0];
      if (velocities) velocities[k] = t.velocity(k)[0];
    }
  });
}

kramers_status kramers_trajectory_write_csv(const kramers_trajectory* traj, const char* path) {
  return guarded([&] {
    require(traj, "traj");
    require(path, "path");
    kramers::io::write_trajectory_csv(path, traj->traj);
  });
}

kramers_status kramers_trajectory_read_csv(const char* path, kramers_trajectory** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new kramers_trajectory{kramers::io::read_trajectory_csv(path)};
  });
}

kramers_status kramers_sup_distance(const kramers_trajectory* a, const kramers_trajectory* b, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = kramers::sup_distance(a->traj, b->traj);
  });
}

// -- estimation ----------------------------------------------------------------

kramers_status kramers_objective(const kramers_trajectory* traj, const kramers_model* model, double friction,
                                 double theta, double* out) {
  return guarded([&] {
    require(traj, "traj");
    require(model, "model");
    require(out, "out");
    *out = kramers::objective(traj->traj, model->model, friction, theta);
  });
}

kramers_status kramers_estimate_closed_form(const kramers_trajectory* traj, const kramers_model* model,
                                            double friction, double lo, double hi, kramers_estimate* out) {
  return guarded([&] {
    require(traj, "traj");
    require(model, "model");
    require(out, "out");
    *out = to_c(kramers::minimize_closed_form(traj->traj, model->model, friction, {lo, hi}));
  });
}

kramers_status kramers_estimate_golden(const kramers_trajectory* traj, const kramers_model* model, double friction,
                                       double lo, double hi, double tol, kramers_estimate* out) {
  return guarded([&] {
    require(traj, "traj");
    require(model, "model");
    require(out, "out");
    *out = to_c(kramers::minimize_golden(traj->traj, model->model, friction, {lo, hi}, tol));
  });
}

kramers_status kramers_uniform_objective_gap(const kramers_trajectory* underdamped,
                                             const kramers_trajectory* overdamped, const kramers_model* model,
                                             double friction, double lo, double hi, int grid_points, double* out) {
  return guarded([&] {
    require(underdamped, "underdamped");
    require(overdamped, "overdamped");
    require(model, "model");
    require(out, "out");
    *out = kramers::uniform_objective_gap(underdamped->traj, overdamped->traj, model->model, friction, {lo, hi},
                                          grid_points);
  });
}

kramers_status kramers_curve_create(const kramers_trajectory* traj, const kramers_model* model, double friction,
                                    double lo, double hi, int points, kramers_curve** out) {
  return guarded([&] {
    require(traj, "traj");
    require(model, "model");
    require(out, "out");
    *out = new kramers_curve{kramers::objective_curve(traj->traj, model->model, friction, lo, hi, points)};
  });
}

void kramers_curve_destroy(kramers_curve* curve) { delete curve; }

size_t kramers_curve_size(const kramers_curve* curve) { return curve ? curve->points.size() : 0; }

kramers_status kramers_curve_point(const kramers_curve* curve, size_t index, double* theta, double* objective) {
  return guarded([&] {
    require(curve, "curve");
    if (index >= curve->points.size())
      throw kramers::Error(kramers::ErrorKind::InvalidInput, "curve index out of range");
    if (theta) *theta = curve->points[index].theta;
    if (objective) *objective = curve->points[index].objective;
  });
}

kramers_status kramers_curve_write_csv(const kramers_curve* curve, const char* path) {
  return guarded([&] {
    require(curve, "curve");
    require(path, "path");
    kramers::io::write_curve_csv(path, curve->points);
  });
}

// -- experiments ---------------------------------------------------------------

void kramers_figure1_default_config(kramers_figure1_config* cfg) {
  if (!cfg) return;
  const kramers::Figure1Config d;
  cfg->friction = d.friction;
  cfg->noise = d.noise;
  cfg->theta_true = d.theta_true;
  cfg->mass = d.mass;
  cfg->x0 = d.x0;
  cfg->v0 = d.v0;
  cfg->n = d.n;
  cfg->dt = d.dt;
  cfg->substeps = d.substeps;
  cfg->scheme = from_scheme(d.scheme);
  cfg->mode = KRAMERS_MODE_UNDERDAMPED;
  cfg->lo = d.space.lo;
  cfg->hi = d.space.hi;
  cfg->tol = d.tol;
  cfg->curve_lo = d.curve_lo;
  cfg->curve_hi = d.curve_hi;
  cfg->curve_points = d.curve_points;
}

kramers_status kramers_figure1_run(const kramers_figure1_config* cfg, uint64_t seed, kramers_trajectory** trajectory,
                                   kramers_curve** curve, kramers_estimate* estimate) {
  return guarded([&] {
    require(cfg, "cfg");
    kramers::Figure1Config c;
    c.friction = cfg->friction;
    c.noise = cfg->noise;
    c.theta_true = cfg->theta_true;
    c.mass = cfg->mass;
    c.x0 = cfg->x0;
    c.v0 = cfg->v0;
    c.n = cfg->n;
    c.dt = cfg->dt;
    c.substeps = cfg->substeps;
    c.scheme = to_scheme(cfg->scheme);
    c.mode = cfg->mode == KRAMERS_MODE_OVERDAMPED ? kramers::SimulationMode::Overdamped
                                                  : kramers::SimulationMode::Underdamped;
    c.space = {cfg->lo, cfg->hi};
    c.tol = cfg->tol;
    c.curve_lo = cfg->curve_lo;
    c.curve_hi = cfg->curve_hi;
    c.curve_points = cfg->curve_points;
    auto res = kramers::run_figure1(seed, c);
    if (estimate) *estimate = to_c(res.estimate);
    if (curve) *curve = new kramers_curve{std::move(res.curve)};
    if (trajectory) *trajectory = new kramers_trajectory{std::move(res.trajectory)};
  });
}

void kramers_sweep_default_config(kramers_model_id model, kramers_sweep_config* cfg) {
  if (!cfg) return;
  const auto d = kramers::SweepConfig::defaults_for(model == KRAMERS_MODEL_COLLOIDAL ? kramers::ModelId::Colloidal
                                                                                      : kramers::ModelId::OU);
  *cfg = kramers_sweep_config{};
  cfg->delta = d.delta;
  cfg->replicates = d.replicates;
  cfg->base_seed = d.base_seed;
  cfg->model_id = model;
  cfg->theta_true = d.theta_true;
  cfg->lo = d.space.lo;
  cfg->hi = d.space.hi;
  cfg->friction = d.friction;
  cfg->noise = d.noise;
  cfg->x0 = d.x0;
  cfg->v0 = d.v0;
  cfg->substeps = d.substeps;
  cfg->scheme = from_scheme(d.scheme);
  cfg->diagnostics = d.diagnostics ? 1 : 0;
  cfg->gap_points = d.gap_points;
  cfg->threads = d.threads;
}

kramers_status kramers_sweep_run(const kramers_sweep_config* cfg, kramers_sweep_result** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    if (cfg->mu_count) require(cfg->mu_values, "mu_values");
    if (cfg->n_count) require(cfg->n_values, "n_values");
    kramers::SweepConfig c;
    c.mu_values.assign(cfg->mu_values, cfg->mu_values + cfg->mu_count);
    c.n_values.assign(cfg->n_values, cfg->n_values + cfg->n_count);
    c.delta = cfg->delta;
    c.replicates = cfg->replicates;
    c.base_seed = cfg->base_seed;
    if (cfg->model_id != KRAMERS_MODEL_COLLOIDAL && cfg->model_id != KRAMERS_MODEL_OU)
      throw kramers::Error(kramers::ErrorKind::InvalidInput, "unknown model id");
    c.model_id = cfg->model_id == KRAMERS_MODEL_COLLOIDAL ? kramers::ModelId::Colloidal : kramers::ModelId::OU;
    c.theta_true = cfg->theta_true;
    c.space = {cfg->lo, cfg->hi};
    c.friction = cfg->friction;
    c.noise = cfg->noise;
    c.x0 = cfg->x0;
    c.v0 = cfg->v0;
    c.substeps = cfg->substeps;
    c.scheme = to_scheme(cfg->scheme);
    c.diagnostics = cfg->diagnostics != 0;
    c.gap_points = cfg->gap_points;
    c.threads = cfg->threads;
    auto result = kramers::run_consistency_sweep(c);
    auto summary = kramers::summarize_sweep(result, 1000, c.base_seed);
    *out = new kramers_sweep_result{std::move(result), std::move(summary)};
  });
}

void kramers_sweep_destroy(kramers_sweep_result* result) { delete result; }

size_t kramers_sweep_row_count(const kramers_sweep_result* result) { return result ? result->result.rows.size() : 0; }

size_t kramers_sweep_failure_count(const kramers_sweep_result* result) {
  return result ? result->result.failures() : 0;
}

kramers_status kramers_sweep_row_get(const kramers_sweep_result* result, size_t index, kramers_sweep_row* row) {
  return guarded([&] {
    require(result, "result");
    require(row, "row");
    if (index >= result->result.rows.size())
      throw kramers::Error(kramers::ErrorKind::InvalidInput, "sweep row index out of range");
    const auto& r = result->result.rows[index];
    *row = kramers_sweep_row{r.mu, r.n, r.replicate, r.theta_hat, r.abs_error, r.ok() ? 1 : 0};
  });
}

const char* kramers_sweep_row_error(const kramers_sweep_result* result, size_t index) {
  if (!result || index >= result->result.rows.size()) return "";
  return result->result.rows[index].error.c_str();
}

size_t kramers_sweep_summary_count(const kramers_sweep_result* result) { return result ? result->summary.size() : 0; }

kramers_status kramers_sweep_summary_get(const kramers_sweep_result* result, size_t index,
                                         kramers_sweep_summary_row* row) {
  return guarded([&] {
    require(result, "result");
    require(row, "row");
    if (index >= result->summary.size())
      throw kramers::Error(kramers::ErrorKind::InvalidInput, "summary index out of range");
    const auto& s = result->summary[index];
    *row = kramers_sweep_summary_row{s.mu, s.n, s.ok, s.failed, s.median_abs_error, s.bootstrap_se};
  });
}

kramers_status kramers_sweep_write_csv(const kramers_sweep_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    require(path, "path");
    kramers::io::write_file_atomic(path, kramers::io::sweep_csv(result->result));
  });
}

kramers_status kramers_sweep_write_diagnostics_csv(const kramers_sweep_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    require(path, "path");
    if (result->result.diagnostics.empty())
      throw kramers::Error(kramers::ErrorKind::Precondition, "sweep ran without diagnostics");
    kramers::io::write_file_atomic(path, kramers::io::sweep_diagnostics_csv(result->result));
  });
}

void kramers_gamma_default_config(kramers_gamma_config* cfg) {
  if (!cfg) return;
  const kramers::GammaDiagnosticConfig d;
  *cfg = kramers_gamma_config{d.friction, d.noise, d.theta_true, d.x0,        d.v0,          d.dt,
                              d.substeps, from_scheme(d.scheme), d.space.lo, d.space.hi, d.gap_points};
}

kramers_status kramers_gamma_diagnostic_run(const kramers_gamma_config* cfg, const double* mu_values, size_t mu_count,
                                            size_t n, uint64_t seed, kramers_gamma_row* rows) {
  return guarded([&] {
    require(cfg, "cfg");
    require(mu_values, "mu_values");
    require(rows, "rows");
    kramers::GammaDiagnosticConfig c;
    c.friction = cfg->friction;
    c.noise = cfg->noise;
    c.theta_true = cfg->theta_true;
    c.x0 = cfg->x0;
    c.v0 = cfg->v0;
    c.dt = cfg->dt;
    c.substeps = cfg->substeps;
    c.scheme = to_scheme(cfg->scheme);
    c.space = {cfg->lo, cfg->hi};
    c.gap_points = cfg->gap_points;
    const auto out = kramers::run_gamma_diagnostic({mu_values, mu_count}, n, seed, c);
    for (size_t i = 0; i < out.size(); ++i) rows[i] = kramers_gamma_row{out[i].mu, out[i].uniform_gap, out[i].sup_distance};
  });
}

kramers_status kramers_gamma_write_csv(const kramers_gamma_row* rows, size_t count, const char* path) {
  return guarded([&] {
    require(rows, "rows");
    require(path, "path");
    std::vector<kramers::GammaRow> r;
    r.reserve(count);
    for (size_t i = 0; i < count; ++i) r.push_back({rows[i].mu, rows[i].uniform_gap, rows[i].sup_distance});
    kramers::io::write_file_atomic(path, kramers::io::gamma_csv(r));
  });
}

} // extern "C"
