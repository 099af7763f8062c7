#pragma once

#include "core.hpp"

namespace kramers {

enum class Scheme {
  /// Plain explicit Euler on (x, v). Needs substep width < mu / (2 gamma).
  EulerMaruyama,
  /// Exact Ornstein-Uhlenbeck sub-flow for the velocity damping, momentum
  /// balance for the position. Stable for any mu.
  ExponentialVelocity,
};

const char* to_string(Scheme scheme);

struct IntegratorSpec {
  Scheme scheme = Scheme::ExponentialVelocity;
};

/// mu x'' = b(x, theta) - gamma x' + sigma W'. Returns positions and
/// velocities at the grid points; internal substeps are not stored.
Trajectory simulate_underdamped(const DriftModel& model, double theta, const SystemParams& params,
                                const ObservationGrid& grid, const IntegratorSpec& spec, const NoisePath& noise);

/// x' = b(x, theta) / gamma + (sigma / gamma) W', Euler-Maruyama on the
/// substeps. The scheme in `spec` is ignored; v0 is unused.
Trajectory simulate_overdamped(const DriftModel& model, double theta, const SystemParams& params,
                               const ObservationGrid& grid, const IntegratorSpec& spec, const NoisePath& noise);

struct CoupledRunResult {
  Trajectory underdamped;
  Trajectory overdamped;
  double sup_distance = 0.0;
};

/// Runs both equations on the same Brownian increments.
CoupledRunResult simulate_coupled(const DriftModel& model, double theta, const SystemParams& params,
                                  const ObservationGrid& grid, const IntegratorSpec& spec, const NoisePath& noise);

/// max_k |a(t_k) - b(t_k)| (Euclidean norm per grid point). Grids must match.
double sup_distance(const Trajectory& a, const Trajectory& b);

} // namespace kramers
