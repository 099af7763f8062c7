#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kramers {

const char* to_string(Scheme scheme) {
  switch (scheme) {
  case Scheme::EulerMaruyama: return "euler-maruyama";
  case Scheme::ExponentialVelocity: return "exponential-velocity";
  }
  return "unknown";
}

namespace {

void check_inputs(const DriftModel& model, const SystemParams& params, const ObservationGrid& grid,
                  const NoisePath& noise) {
  params.validate();
  if (params.dim() != model.dim())
    throw Error(ErrorKind::InvalidInput, "x0 has dimension " + std::to_string(params.dim()) + " but model '" +
                                             model.name() + "' expects " + std::to_string(model.dim()));
  if (noise.dim() != model.dim())
    throw Error(ErrorKind::InvalidInput, "noise path dimension does not match the model");
  if (noise.substeps() != grid.total_substeps())
    throw Error(ErrorKind::InvalidInput, "noise path has " + std::to_string(noise.substeps()) +
                                             " increments, grid needs " + std::to_string(grid.total_substeps()));
}

[[noreturn]] void diverged(const char* which, std::size_t substep, const ObservationGrid& grid) {
  const std::size_t k = substep / grid.substeps() + 1;
  std::ostringstream os;
  os << which << " integration diverged: non-finite state at substep " << substep << " (interval " << k
     << ", t in [" << grid.times()[k - 1] << ", " << grid.times()[k] << "])";
  throw Error(ErrorKind::Divergence, os.str());
}

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace

Trajectory simulate_underdamped(const DriftModel& model, double theta, const SystemParams& params,
                                const ObservationGrid& grid, const IntegratorSpec& spec, const NoisePath& noise) {
  check_inputs(model, params, grid, noise);
  const double mu = params.mass;
  const double gamma = params.friction;
  const double sigma = params.noise;
  if (spec.scheme == Scheme::EulerMaruyama && !(grid.max_substep_width() < mu / (2.0 * gamma))) {
    std::ostringstream os;
    os << "Euler-Maruyama stability guard: substep width " << grid.max_substep_width()
       << " must be below mu/(2 gamma) = " << mu / (2.0 * gamma);
    throw Error(ErrorKind::Precondition, os.str());
  }

  const std::size_t dim = model.dim();
  std::vector<double> x = params.x0;
  std::vector<double> v = params.v0;
  std::vector<double> b(dim);
  std::vector<double> xs(grid.points() * dim);
  std::vector<double> vs(grid.points() * dim);
  std::copy(x.begin(), x.end(), xs.begin());
  std::copy(v.begin(), v.end(), vs.begin());

  std::size_t j = 0;
  for (std::size_t k = 1; k <= grid.intervals(); ++k) {
    const double h = grid.substep_width(k);
    // Exact OU factors over one substep; noise scaled to the exact
    // velocity variance (sigma/mu)^2 (1 - e^{-2 lambda h}) / (2 lambda).
    const double lambda = gamma / mu;
    const double decay = std::exp(-lambda * h);
    const double one_minus_decay = -std::expm1(-lambda * h);
    const double noise_scale = sigma / mu * std::sqrt(-std::expm1(-2.0 * lambda * h) / (2.0 * lambda * h));

    for (std::size_t s = 0; s < grid.substeps(); ++s, ++j) {
      const auto dw = noise.at(j);
      model.eval(x, theta, b);
      if (spec.scheme == Scheme::ExponentialVelocity) {
        for (std::size_t i = 0; i < dim; ++i) {
          const double v_next = v[i] * decay + b[i] / gamma * one_minus_decay + noise_scale * dw[i];
          // gamma dx = b dt + sigma dW - mu dv
          x[i] += (b[i] * h + sigma * dw[i] - mu * (v_next - v[i])) / gamma;
          v[i] = v_next;
        }
      } else {
        for (std::size_t i = 0; i < dim; ++i) {
          const double v_next = v[i] + (b[i] - gamma * v[i]) * h / mu + sigma * dw[i] / mu;
          x[i] += v[i] * h;
          v[i] = v_next;
        }
      }
      if (!finite(x) || !finite(v)) diverged("underdamped", j, grid);
    }
    std::copy(x.begin(), x.end(), xs.begin() + k * dim);
    std::copy(v.begin(), v.end(), vs.begin() + k * dim);
  }
  return Trajectory(grid, dim, std::move(xs), std::move(vs));
}

Trajectory simulate_overdamped(const DriftModel& model, double theta, const SystemParams& params,
                               const ObservationGrid& grid, const IntegratorSpec&, const NoisePath& noise) {
  check_inputs(model, params, grid, noise);
  const double gamma = params.friction;
  const double sigma = params.noise;
  const std::size_t dim = model.dim();

  std::vector<double> x = params.x0;
  std::vector<double> b(dim);
  std::vector<double> xs(grid.points() * dim);
  std::copy(x.begin(), x.end(), xs.begin());

  std::size_t j = 0;
  for (std::size_t k = 1; k <= grid.intervals(); ++k) {
    const double h = grid.substep_width(k);
    for (std::size_t s = 0; s < grid.substeps(); ++s, ++j) {
      const auto dw = noise.at(j);
      model.eval(x, theta, b);
      for (std::size_t i = 0; i < dim; ++i) x[i] += (b[i] * h + sigma * dw[i]) / gamma;
      if (!finite(x)) diverged("overdamped", j, grid);
    }
    std::copy(x.begin(), x.end(), xs.begin() + k * dim);
  }
  return Trajectory(grid, dim, std::move(xs));
}

CoupledRunResult simulate_coupled(const DriftModel& model, double theta, const SystemParams& params,
                                  const ObservationGrid& grid, const IntegratorSpec& spec, const NoisePath& noise) {
  Trajectory under = simulate_underdamped(model, theta, params, grid, spec, noise);
  Trajectory over = simulate_overdamped(model, theta, params, grid, spec, noise);
  const double d = sup_distance(under, over);
  return CoupledRunResult{std::move(under), std::move(over), d};
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid().times() == b.grid().times()) || a.dim() != b.dim())
    throw Error(ErrorKind::InvalidInput, "sup_distance: trajectories are on different grids");
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const double d = a.position(k)[i] - b.position(k)[i];
      sq += d * d;
    }
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

} // namespace kramers
