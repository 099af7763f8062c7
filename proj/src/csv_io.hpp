#pragma once

#include "core.hpp"
#include "estimate.hpp"
#include "experiments.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace kramers::io {

/// Shortest representation that round-trips exactly.
std::string format_double(double value);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Header `t,x` (1-D) or `t,x0,x1,...`; velocity columns `v` / `v0,...` when present.
std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Parses the trajectory schema back; the grid gets one substep per interval.
Trajectory parse_trajectory_csv(const std::string& text, const std::string& source = "<memory>");
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Header `theta,objective`.
std::string curve_csv(std::span<const CurvePoint> curve);
void write_curve_csv(const std::filesystem::path& path, std::span<const CurvePoint> curve);

/// Header `mu,n,replicate,theta_hat,abs_error`; failed cells carry `nan`.
std::string sweep_csv(const SweepResult& result);
/// Header `mu,n,sup_distance,uniform_gap`.
std::string sweep_diagnostics_csv(const SweepResult& result);
/// Header `mu,uniform_gap,sup_distance`.
std::string gamma_csv(std::span<const GammaRow> rows);

} // namespace kramers::io
