#pragma once

#include "core.hpp"

#include <functional>
#include <vector>

namespace kramers {

/// Compact parameter interval [lo, hi].
struct ParameterSpace {
  double lo = 0.0;
  double hi = 1.0;

  void validate() const;
  bool contains(double theta) const noexcept { return lo <= theta && theta <= hi; }
};

enum class Method { ClosedForm, GoldenSection };

const char* to_string(Method method);

struct EstimationResult {
  double theta_hat = 0.0;
  double objective_at_min = 0.0;
  Method method = Method::ClosedForm;
  bool at_boundary = false;
  int evaluations = 0;
};

/// Least-squares drift objective on observed positions:
///
///   F(theta) = sum_k || x_k - x_{k-1} - b(x_{k-1}, theta) dt_k / gamma ||^2 / dt_k
///
/// Evaluated with extended-precision accumulation so that minimizers can be
/// resolved well below sqrt(machine epsilon).
double objective(const Trajectory& traj, const DriftModel& model, double friction, double theta);

/// For b = theta * b1(x) + b0(x) the objective is a quadratic in theta; returns
/// its vertex clipped into `space`. Throws Identifiability when
/// sum ||b1||^2 dt / gamma^2 vanishes.
EstimationResult minimize_closed_form(const Trajectory& traj, const DriftModel& model, double friction,
                                      const ParameterSpace& space);

/// Coarse scan of `scan_points` equispaced values over the space, then
/// golden-section refinement of the bracket around the best scan point until
/// its width is below `tol`, finished with one parabolic step.
EstimationResult minimize_golden(const Trajectory& traj, const DriftModel& model, double friction,
                                 const ParameterSpace& space, double tol, int scan_points = 101);

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of `f` on [lo, hi]; stops once the
/// bracket is narrower than `tol`.
ScalarMinimum golden_section_search(const std::function<double(double)>& f, double lo, double hi, double tol);

/// max over an equispaced theta grid of |F_under(theta) - F_over(theta)|; both
/// trajectories must share one observation grid.
double uniform_objective_gap(const Trajectory& traj_under, const Trajectory& traj_over, const DriftModel& model,
                             double friction, const ParameterSpace& space, int grid_points = 1001);

struct CurvePoint {
  double theta;
  double objective;
};

std::vector<CurvePoint> objective_curve(const Trajectory& traj, const DriftModel& model, double friction, double lo,
                                        double hi, int points);

} // namespace kramers
