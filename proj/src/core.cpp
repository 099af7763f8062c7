#include "core.hpp"

#include "philox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace kramers {

const char* to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidInput: return "invalid input";
  case ErrorKind::Precondition: return "precondition violated";
  case ErrorKind::Divergence: return "divergence";
  case ErrorKind::Identifiability: return "not identifiable";
  case ErrorKind::ModelEvaluation: return "model evaluation";
  case ErrorKind::Io: return "i/o";
  }
  return "unknown";
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace

// ---------------------------------------------------------------------------

DriftModel::DriftModel(std::string name, std::size_t dim, DriftFn eval, std::optional<LinearParts> linear)
    : name_(std::move(name)), dim_(dim), eval_(std::move(eval)), linear_(std::move(linear)) {
  if (dim_ == 0) invalid("drift model '" + name_ + "': dimension must be positive");
  if (!eval_) invalid("drift model '" + name_ + "': missing evaluation function");
  if (linear_ && (!linear_->slope || !linear_->offset))
    invalid("drift model '" + name_ + "': incomplete linear decomposition");
}

const LinearParts& DriftModel::linear() const {
  if (!linear_) throw Error(ErrorKind::Precondition, "drift model '" + name_ + "' is not linear in theta");
  return *linear_;
}

std::vector<double> eval_drift(const DriftModel& model, std::span<const double> x, double theta) {
  if (x.size() != model.dim())
    invalid("eval_drift: position has dimension " + std::to_string(x.size()) + ", model expects " +
            std::to_string(model.dim()));
  std::vector<double> out(model.dim());
  model.eval(x, theta, out);
  if (!all_finite(out)) {
    std::ostringstream os;
    os << "drift model '" << model.name() << "' returned a non-finite value at x[0]=" << x[0]
       << ", theta=" << theta;
    throw Error(ErrorKind::ModelEvaluation, os.str());
  }
  return out;
}

double ColloidalForce::default_g_eff() {
  return 4.0 / 3.0 * std::numbers::pi * (1.31 / 2.0) * (1.31 / 2.0) * 0.51 * 9.8 * 1e-3;
}

double ColloidalForce::operator()(double x, double theta) const {
  return theta * std::exp(-x / debye_length) - g_eff;
}

DriftModel colloidal_model(const ColloidalForce& force) {
  auto eval = [force](std::span<const double> x, double theta, std::span<double> out) {
    out[0] = force(x[0], theta);
  };
  LinearParts parts{
      [force](std::span<const double> x, std::span<double> out) { out[0] = std::exp(-x[0] / force.debye_length); },
      [force](std::span<const double>, std::span<double> out) { out[0] = -force.g_eff; }};
  return DriftModel("colloidal", 1, eval, std::move(parts));
}

DriftModel ou_model(std::size_t dim) {
  auto eval = [](std::span<const double> x, double theta, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = -theta * x[i];
  };
  LinearParts parts{[](std::span<const double> x, std::span<double> out) {
                      for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
                    },
                    [](std::span<const double>, std::span<double> out) {
                      for (double& o : out) o = 0.0;
                    }};
  return DriftModel("ou", dim, eval, std::move(parts));
}

namespace {

DriftModel make_affine(std::string name, double slope, double offset, std::size_t dim) {
  auto eval = [slope, offset](std::span<const double>, double theta, std::span<double> out) {
    for (double& o : out) o = theta * slope + offset;
  };
  LinearParts parts{[slope](std::span<const double>, std::span<double> out) {
                      for (double& o : out) o = slope;
                    },
                    [offset](std::span<const double>, std::span<double> out) {
                      for (double& o : out) o = offset;
                    }};
  return DriftModel(std::move(name), dim, eval, std::move(parts));
}

} // namespace

DriftModel affine_theta_model(double slope, double offset, std::size_t dim) {
  return make_affine("affine", slope, offset, dim);
}

DriftModel zero_drift_model(std::size_t dim) { return make_affine("zero-drift", 0.0, 0.0, dim); }

// ---------------------------------------------------------------------------

void SystemParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) invalid("mu (mass) must be a finite value > 0");
  if (!(friction > 0.0) || !std::isfinite(friction)) invalid("gamma (friction) must be a finite value > 0");
  if (!(noise >= 0.0) || !std::isfinite(noise)) invalid("sigma (noise) must be a finite value >= 0");
  if (x0.empty()) invalid("x0 must have at least one component");
  if (v0.size() != x0.size()) invalid("v0 must have the same dimension as x0");
  if (!all_finite(x0)) invalid("x0 must be finite");
  if (!all_finite(v0)) invalid("v0 must be finite");
}

ObservationGrid::ObservationGrid(std::vector<double> times, std::size_t substeps_per_interval)
    : times_(std::move(times)), substeps_(substeps_per_interval) {
  if (times_.size() < 2) invalid("observation grid needs at least two time points");
  if (times_[0] != 0.0) invalid("observation grid must start at t = 0");
  if (substeps_ == 0) invalid("substeps per interval must be positive");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k]) || !(times_[k] > times_[k - 1]))
      invalid("observation times must be finite and strictly increasing (index " + std::to_string(k) + ")");
  }
}

ObservationGrid ObservationGrid::uniform(std::size_t intervals, double dt, std::size_t substeps_per_interval) {
  if (intervals == 0) invalid("grid must have at least one interval");
  if (!(dt > 0.0) || !std::isfinite(dt)) invalid("dt must be a finite value > 0");
  std::vector<double> t(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) t[k] = static_cast<double>(k) * dt;
  return ObservationGrid(std::move(t), substeps_per_interval);
}

double ObservationGrid::max_substep_width() const {
  double w = 0.0;
  for (std::size_t k = 1; k < times_.size(); ++k) w = std::max(w, substep_width(k));
  return w;
}

ObservationGrid ObservationGrid::with_substeps(std::size_t substeps_per_interval) const {
  return ObservationGrid(times_, substeps_per_interval);
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(ObservationGrid grid, std::size_t dim, std::vector<double> positions,
                       std::optional<std::vector<double>> velocities)
    : grid_(std::move(grid)), dim_(dim), positions_(std::move(positions)), velocities_(std::move(velocities)) {
  if (dim_ == 0) invalid("trajectory dimension must be positive");
  if (positions_.size() != grid_.points() * dim_)
    invalid("trajectory has " + std::to_string(positions_.size() / dim_) + " positions for " +
            std::to_string(grid_.points()) + " grid points");
  if (velocities_ && velocities_->size() != positions_.size())
    invalid("trajectory velocities must match positions in length");
  if (!all_finite(positions_) || (velocities_ && !all_finite(*velocities_)))
    invalid("trajectory entries must be finite");
}

std::span<const double> Trajectory::velocity(std::size_t k) const {
  if (!velocities_) throw Error(ErrorKind::Precondition, "trajectory carries no velocities");
  return {velocities_->data() + k * dim_, dim_};
}

// ---------------------------------------------------------------------------

NoisePath::NoisePath(std::size_t dim, std::vector<double> increments, std::uint64_t seed, std::uint64_t stream_id)
    : dim_(dim), increments_(std::move(increments)), seed_(seed), stream_id_(stream_id) {
  if (dim_ == 0) invalid("noise path dimension must be positive");
  if (increments_.size() % dim_ != 0) invalid("noise increments are not a multiple of the dimension");
}

NoisePath NoisePath::coarsened(std::size_t factor) const {
  if (factor == 0 || substeps() % factor != 0) invalid("coarsening factor must divide the substep count");
  std::vector<double> out(increments_.size() / factor, 0.0);
  for (std::size_t j = 0; j < substeps(); ++j)
    for (std::size_t i = 0; i < dim_; ++i) out[(j / factor) * dim_ + i] += increments_[j * dim_ + i];
  return NoisePath(dim_, std::move(out), seed_, stream_id_);
}

void fill_standard_normals(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t first, std::span<double> out) {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kInv53 = 1.0 / 9007199254740992.0; // 2^-53

  // Each Philox block yields two 64-bit words -> one Box-Muller pair.
  std::uint64_t block = first / 2;
  std::size_t i = 0;
  while (i < out.size()) {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                                  static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    const auto r = Philox4x32::apply(ctr, key);
    const std::uint64_t w0 = (std::uint64_t{r[0]} << 32) | r[1];
    const std::uint64_t w1 = (std::uint64_t{r[2]} << 32) | r[3];
    // u1 in (0, 1], never zero
    const double u1 = (static_cast<double>(w0 >> 11) + 1.0) * kInv53;
    const double u2 = static_cast<double>(w1 >> 11) * kInv53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double pair[2] = {radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2)};
    for (std::size_t slot = (block == first / 2 ? first % 2 : 0); slot < 2 && i < out.size(); ++slot)
      out[i++] = pair[slot];
    ++block;
  }
}

NoisePath make_noise_path(std::uint64_t seed, std::uint64_t stream_id, const ObservationGrid& grid, std::size_t dim) {
  if (dim == 0) invalid("noise path dimension must be positive");
  const std::size_t s = grid.substeps();
  std::vector<double> inc(grid.total_substeps() * dim);
  fill_standard_normals(seed, stream_id, 0, inc);
  for (std::size_t k = 1; k <= grid.intervals(); ++k) {
    const double scale = std::sqrt(grid.substep_width(k));
    const std::size_t begin = (k - 1) * s * dim;
    for (std::size_t j = begin; j < begin + s * dim; ++j) inc[j] *= scale;
  }
  return NoisePath(dim, std::move(inc), seed, stream_id);
}

} // namespace kramers
