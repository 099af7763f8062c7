#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kramers {

enum class ErrorKind {
  InvalidInput,
  Precondition,
  Divergence,
  Identifiability,
  ModelEvaluation,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Drift models

/// Writes b(x, theta) into `out` (same length as `x`).
using DriftFn = std::function<void(std::span<const double> x, double theta, std::span<double> out)>;
/// A theta-free vector field x -> f(x).
using FieldFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// b(x, theta) = theta * slope(x) + offset(x)
struct LinearParts {
  FieldFn slope;
  FieldFn offset;
};

class DriftModel {
public:
  DriftModel(std::string name, std::size_t dim, DriftFn eval, std::optional<LinearParts> linear = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }

  // Unchecked evaluation for the integrator hot loops.
  void eval(std::span<const double> x, double theta, std::span<double> out) const { eval_(x, theta, out); }

  bool has_linear_decomposition() const noexcept { return linear_.has_value(); }
  const LinearParts& linear() const;

private:
  std::string name_;
  std::size_t dim_;
  DriftFn eval_;
  std::optional<LinearParts> linear_;
};

/// Evaluates b(x, theta); throws ModelEvaluation on non-finite output.
std::vector<double> eval_drift(const DriftModel& model, std::span<const double> x, double theta);

/// Electrostatic wall repulsion plus effective gravity, in units of g, nm, s:
///   F(x, theta) = theta * exp(-x / debye_length) - g_eff
struct ColloidalForce {
  double debye_length = 18.0;
  double g_eff = default_g_eff();

  /// (4/3) * pi * (1.31/2)^2 * 0.51 * 9.8e-3, evaluated as printed for the
  /// experiment's force law (about 8.981e-3).
  static double default_g_eff();

  double operator()(double x, double theta) const;
};

DriftModel colloidal_model(const ColloidalForce& force = {});
/// b(x, theta) = -theta * x, componentwise.
DriftModel ou_model(std::size_t dim = 1);
/// b(x, theta) = theta * slope + offset, constant in x. Covers the zero drift
/// (0, 0), a theta-free constant drift (0, c) and b = theta (1, 0).
DriftModel affine_theta_model(double slope, double offset, std::size_t dim = 1);
DriftModel zero_drift_model(std::size_t dim = 1);

// ---------------------------------------------------------------------------
// System parameters and observation grid

struct SystemParams {
  double mass = 1.0;     // mu > 0
  double friction = 1.0; // gamma > 0
  double noise = 0.0;    // sigma >= 0
  std::vector<double> x0{0.0};
  std::vector<double> v0{0.0};

  std::size_t dim() const noexcept { return x0.size(); }
  /// Throws InvalidInput naming the offending field.
  void validate() const;
};

class ObservationGrid {
public:
  /// times[0] must be 0 and the sequence strictly increasing.
  ObservationGrid(std::vector<double> times, std::size_t substeps_per_interval = 1);

  /// n intervals of width dt: t_k = k * dt.
  static ObservationGrid uniform(std::size_t intervals, double dt, std::size_t substeps_per_interval = 1);

  const std::vector<double>& times() const noexcept { return times_; }
  std::size_t points() const noexcept { return times_.size(); }
  std::size_t intervals() const noexcept { return times_.size() - 1; }
  std::size_t substeps() const noexcept { return substeps_; }
  std::size_t total_substeps() const noexcept { return intervals() * substeps_; }
  double horizon() const noexcept { return times_.back(); }

  /// Delta_k t = t_k - t_{k-1}, k in [1, intervals()].
  double width(std::size_t k) const { return times_[k] - times_[k - 1]; }
  double substep_width(std::size_t k) const { return width(k) / static_cast<double>(substeps_); }
  double max_substep_width() const;

  ObservationGrid with_substeps(std::size_t substeps_per_interval) const;

  bool operator==(const ObservationGrid& other) const = default;

private:
  std::vector<double> times_;
  std::size_t substeps_;
};

// ---------------------------------------------------------------------------
// Trajectories

class Trajectory {
public:
  Trajectory(ObservationGrid grid, std::size_t dim, std::vector<double> positions,
             std::optional<std::vector<double>> velocities = {});

  const ObservationGrid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return grid_.points(); }

  std::span<const double> position(std::size_t k) const { return {positions_.data() + k * dim_, dim_}; }
  std::span<const double> velocity(std::size_t k) const;
  bool has_velocities() const noexcept { return velocities_.has_value(); }

  const std::vector<double>& positions() const noexcept { return positions_; }
  const std::optional<std::vector<double>>& velocities() const noexcept { return velocities_; }

private:
  ObservationGrid grid_;
  std::size_t dim_;
  std::vector<double> positions_;
  std::optional<std::vector<double>> velocities_;
};

// ---------------------------------------------------------------------------
// Brownian increments

class NoisePath {
public:
  NoisePath(std::size_t dim, std::vector<double> increments, std::uint64_t seed = 0, std::uint64_t stream_id = 0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t substeps() const noexcept { return increments_.size() / dim_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Increment for global substep j.
  std::span<const double> at(std::size_t j) const { return {increments_.data() + j * dim_, dim_}; }
  const std::vector<double>& increments() const noexcept { return increments_; }

  /// Sums consecutive groups of `factor` substeps: the same Brownian path seen
  /// on a grid with factor-times fewer substeps per interval.
  NoisePath coarsened(std::size_t factor) const;

private:
  std::size_t dim_;
  std::vector<double> increments_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

/// One N(0, delta) increment per internal substep of `grid` (delta the
/// substep width). Deterministic in (seed, stream_id, grid, dim).
NoisePath make_noise_path(std::uint64_t seed, std::uint64_t stream_id, const ObservationGrid& grid,
                          std::size_t dim = 1);

/// Standard normals number `first`, `first+1`, ... of substream (seed, stream_id).
void fill_standard_normals(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t first, std::span<double> out);

} // namespace kramers
