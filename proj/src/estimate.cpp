#include "estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kramers {

void ParameterSpace::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorKind::InvalidInput, "parameter bounds must be finite");
  if (!(lo < hi)) throw Error(ErrorKind::InvalidInput, "parameter space requires lo < hi");
}

const char* to_string(Method method) {
  switch (method) {
  case Method::ClosedForm: return "closed-form";
  case Method::GoldenSection: return "golden-section";
  }
  return "unknown";
}

namespace {

void check_friction(double friction) {
  if (!(friction > 0.0) || !std::isfinite(friction))
    throw Error(ErrorKind::InvalidInput, "friction must be a finite value > 0");
}

void check_model(const Trajectory& traj, const DriftModel& model) {
  if (traj.dim() != model.dim())
    throw Error(ErrorKind::InvalidInput, "trajectory dimension does not match model '" + model.name() + "'");
  if (traj.size() < 2) throw Error(ErrorKind::InvalidInput, "objective needs at least two observations");
}

void check_finite(std::span<const double> b, const DriftModel& model, std::size_t k) {
  for (double v : b)
    if (!std::isfinite(v))
      throw Error(ErrorKind::ModelEvaluation,
                  "drift model '" + model.name() + "' is non-finite at observation " + std::to_string(k));
}

long double objective_extended(const Trajectory& traj, const DriftModel& model, double friction, double theta) {
  const auto& grid = traj.grid();
  const std::size_t dim = traj.dim();
  std::vector<double> b(dim);
  long double total = 0.0L;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double dt = grid.width(k);
    const auto prev = traj.position(k - 1);
    const auto next = traj.position(k);
    model.eval(prev, theta, b);
    check_finite(b, model, k - 1);
    long double sq = 0.0L;
    for (std::size_t i = 0; i < dim; ++i) {
      const long double r = (static_cast<long double>(next[i]) - prev[i]) - static_cast<long double>(b[i]) * dt / friction;
      sq += r * r;
    }
    total += sq / dt;
  }
  return total;
}

template <typename Value, typename F>
std::pair<double, Value> golden_section(F&& f, double lo, double hi, double tol, int& evals) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto eval = [&](double t) {
    ++evals;
    return f(t);
  };

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  Value fc = eval(c);
  Value fd = eval(d);
  // Bracket shrinks by 1/phi per step; the iteration cap only matters when tol
  // is below the floating-point spacing of the bracket.
  for (int iter = 0; iter < 1000 && (b - a) > tol; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
    if (!(c < d)) break;
  }
  const double mid = 0.5 * (a + b);
  return {mid, eval(mid)};
}

} // namespace

double objective(const Trajectory& traj, const DriftModel& model, double friction, double theta) {
  check_friction(friction);
  check_model(traj, model);
  return static_cast<double>(objective_extended(traj, model, friction, theta));
}

EstimationResult minimize_closed_form(const Trajectory& traj, const DriftModel& model, double friction,
                                      const ParameterSpace& space) {
  check_friction(friction);
  check_model(traj, model);
  space.validate();
  const LinearParts& parts = model.linear();
  const auto& grid = traj.grid();
  const std::size_t dim = traj.dim();

  std::vector<double> slope(dim);
  std::vector<double> offset(dim);
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double dt = grid.width(k);
    const auto prev = traj.position(k - 1);
    const auto next = traj.position(k);
    parts.slope(prev, slope);
    parts.offset(prev, offset);
    check_finite(slope, model, k - 1);
    check_finite(offset, model, k - 1);
    for (std::size_t i = 0; i < dim; ++i) {
      const long double r =
          (static_cast<long double>(next[i]) - prev[i]) - static_cast<long double>(offset[i]) * dt / friction;
      num += r * slope[i] / friction;
      den += static_cast<long double>(slope[i]) * slope[i] * dt / (static_cast<long double>(friction) * friction);
    }
  }
  if (!(den > 0.0L) || !std::isfinite(static_cast<double>(den)))
    throw Error(ErrorKind::Identifiability,
                "drift slope vanishes along the observed path; theta is not identifiable from this trajectory");

  const double vertex = static_cast<double>(num / den);
  EstimationResult res;
  res.method = Method::ClosedForm;
  res.theta_hat = std::clamp(vertex, space.lo, space.hi);
  res.at_boundary = res.theta_hat != vertex;
  res.objective_at_min = objective(traj, model, friction, res.theta_hat);
  res.evaluations = 1;
  return res;
}

ScalarMinimum golden_section_search(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "golden-section tolerance must be > 0");
  if (!(lo <= hi)) throw Error(ErrorKind::InvalidInput, "golden-section bracket requires lo <= hi");
  int evals = 0;
  const auto [argmin, value] = golden_section<double>(f, lo, hi, tol, evals);
  return ScalarMinimum{argmin, value, evals};
}

EstimationResult minimize_golden(const Trajectory& traj, const DriftModel& model, double friction,
                                 const ParameterSpace& space, double tol, int scan_points) {
  check_friction(friction);
  check_model(traj, model);
  space.validate();
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be > 0");
  if (scan_points < 3) throw Error(ErrorKind::InvalidInput, "coarse scan needs at least 3 points");

  auto f = [&](double theta) { return objective_extended(traj, model, friction, theta); };
  const double step = (space.hi - space.lo) / (scan_points - 1);
  auto scan_theta = [&](int i) { return i == scan_points - 1 ? space.hi : space.lo + i * step; };

  int best = 0;
  long double best_value = f(space.lo);
  for (int i = 1; i < scan_points; ++i) {
    const long double value = f(scan_theta(i));
    if (value < best_value) {
      best = i;
      best_value = value;
    }
  }

  const double a = scan_theta(std::max(best - 1, 0));
  const double b = scan_theta(std::min(best + 1, scan_points - 1));
  int evals = 0;
  auto [argmin, value] = golden_section<long double>(f, a, b, tol, evals);

  // Rounding noise in F limits comparison-based search to about
  // sqrt(noise / curvature). One parabolic step through points well above the
  // noise scale removes that floor; it is exact when F is quadratic in theta.
  const double h = 1e-4 * (b - a);
  if (argmin - h >= a && argmin + h <= b) {
    const long double fm = f(argmin - h);
    const long double f0 = f(argmin);
    const long double fp = f(argmin + h);
    evals += 3;
    const long double curvature = fp - 2.0L * f0 + fm;
    if (curvature > 0.0L) {
      const double shift = static_cast<double>(h * (fm - fp) / (2.0L * curvature));
      if (std::abs(shift) <= h) {
        argmin += shift;
        value = f(argmin);
        ++evals;
      }
    }
  }

  EstimationResult res;
  res.method = Method::GoldenSection;
  res.evaluations = scan_points + evals;
  res.theta_hat = value <= best_value ? argmin : scan_theta(best);
  res.objective_at_min = static_cast<double>(std::min(value, best_value));
  res.at_boundary = res.theta_hat - space.lo <= tol || space.hi - res.theta_hat <= tol;
  return res;
}

double uniform_objective_gap(const Trajectory& traj_under, const Trajectory& traj_over, const DriftModel& model,
                             double friction, const ParameterSpace& space, int grid_points) {
  if (!(traj_under.grid().times() == traj_over.grid().times()) || traj_under.dim() != traj_over.dim())
    throw Error(ErrorKind::InvalidInput, "uniform_objective_gap: trajectories must share one observation grid");
  space.validate();
  if (grid_points < 2) throw Error(ErrorKind::InvalidInput, "gap grid needs at least 2 points");
  double gap = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double theta = space.lo + (space.hi - space.lo) * i / (grid_points - 1);
    gap = std::max(gap, std::abs(objective(traj_under, model, friction, theta) -
                                 objective(traj_over, model, friction, theta)));
  }
  return gap;
}

std::vector<CurvePoint> objective_curve(const Trajectory& traj, const DriftModel& model, double friction, double lo,
                                        double hi, int points) {
  if (points < 2) throw Error(ErrorKind::InvalidInput, "objective curve needs at least 2 points");
  if (!(lo < hi)) throw Error(ErrorKind::InvalidInput, "objective curve requires lo < hi");
  std::vector<CurvePoint> curve;
  curve.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double theta = i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1);
    curve.push_back({theta, objective(traj, model, friction, theta)});
  }
  return curve;
}

} // namespace kramers
