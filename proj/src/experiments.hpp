#pragma once

#include "core.hpp"
#include "estimate.hpp"
#include "simulate.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kramers {

enum class ModelId { Colloidal, OU };

const char* to_string(ModelId id);
DriftModel make_model(ModelId id);

// ---------------------------------------------------------------------------
// Colloidal particle above a wall, constant diffusion.

enum class SimulationMode { Underdamped, Overdamped };

struct Figure1Config {
  double friction = 1.0 / 6.0;
  double noise = 10.0;
  double theta_true = 0.02;
  double mass = 1e-3;
  double x0 = 0.0;
  double v0 = 0.0;
  // Observation grid: n intervals of width dt (T = n * dt = 1000 s by default).
  std::size_t n = 100000;
  double dt = 1e-2;
  std::size_t substeps = 10;
  Scheme scheme = Scheme::ExponentialVelocity;
  SimulationMode mode = SimulationMode::Underdamped;
  ParameterSpace space{0.0, 0.1};
  double tol = 1e-10;
  double curve_lo = 0.0;
  double curve_hi = 0.04;
  int curve_points = 401;
};

struct Figure1Result {
  Trajectory trajectory;
  std::vector<CurvePoint> curve;
  EstimationResult estimate;
};

Figure1Result run_figure1(std::uint64_t seed, const Figure1Config& cfg = {});

// ---------------------------------------------------------------------------
// (mu, n) consistency sweep with horizon T = delta * sqrt(n).

struct SweepConfig {
  std::vector<double> mu_values{1e-1, 1e-2, 1e-3};
  std::vector<std::size_t> n_values{100, 1000, 10000};
  double delta = 10.0;
  std::size_t replicates = 20;
  std::uint64_t base_seed = 1;
  ModelId model_id = ModelId::OU;
  double theta_true = 1.0;
  ParameterSpace space{0.0, 5.0};
  double friction = 1.0;
  double noise = 1.0;
  double x0 = 0.0;
  double v0 = 0.0;
  std::size_t substeps = 10;
  Scheme scheme = Scheme::ExponentialVelocity;
  bool diagnostics = true;
  int gap_points = 1001;
  unsigned threads = 0; // 0: hardware concurrency

  /// Physical defaults for the chosen model (colloidal uses the figure1
  /// constants and Theta = [0, 0.1]).
  static SweepConfig defaults_for(ModelId id);
  void validate() const;
};

struct SweepRow {
  double mu = 0.0;
  std::size_t n = 0;
  std::size_t replicate = 0;
  double theta_hat = 0.0;
  double abs_error = 0.0;
  std::string error; // empty on success

  bool ok() const noexcept { return error.empty(); }
};

struct SweepDiagnostic {
  double mu = 0.0;
  std::size_t n = 0;
  double sup_distance = 0.0;
  double uniform_gap = 0.0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;               // sorted by (mu index, n index, replicate)
  std::vector<SweepDiagnostic> diagnostics; // one per (mu, n) when enabled
  std::size_t failures() const;
};

/// Noise substream for a sweep cell. Independent of the mu index so that all
/// masses at a given (n, replicate) see the same Brownian path.
std::uint64_t sweep_stream_id(std::size_t n_index, std::size_t replicate);

SweepResult run_consistency_sweep(const SweepConfig& cfg);

struct SweepSummaryRow {
  double mu = 0.0;
  std::size_t n = 0;
  std::size_t ok = 0;
  std::size_t failed = 0;
  double median_abs_error = 0.0;
  double bootstrap_se = 0.0; // of the median
};

/// Median |theta_hat - theta_true| per (mu, n) with a bootstrap standard
/// error; resampling is seeded so the summary is reproducible.
std::vector<SweepSummaryRow> summarize_sweep(const SweepResult& result, std::size_t resamples = 1000,
                                             std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Small-mass diagnostics on coupled paths.

struct GammaDiagnosticConfig {
  double friction = 1.0 / 6.0;
  double noise = 10.0;
  double theta_true = 0.02;
  double x0 = 0.0;
  double v0 = 0.0;
  double dt = 0.1;
  std::size_t substeps = 100;
  Scheme scheme = Scheme::ExponentialVelocity;
  ParameterSpace space{0.0, 0.1};
  int gap_points = 1001;
};

struct GammaRow {
  double mu = 0.0;
  double uniform_gap = 0.0;
  double sup_distance = 0.0;
};

/// Coupled under/overdamped runs on one noise path and the two convergence
/// measures between them.
GammaRow gamma_diagnostic_point(const DriftModel& model, double theta, const SystemParams& params,
                                const ObservationGrid& grid, const IntegratorSpec& spec, const NoisePath& noise,
                                const ParameterSpace& space, int gap_points);

/// Colloidal model; every mu is driven by the same noise path (seed, stream 0).
std::vector<GammaRow> run_gamma_diagnostic(std::span<const double> mu_values, std::size_t n, std::uint64_t seed,
                                           const GammaDiagnosticConfig& cfg = {});

} // namespace kramers
