#include "csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace kramers::io {

namespace fs = std::filesystem;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move output into place at " + path.string());
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out;
  const std::size_t dim = traj.dim();
  auto column = [&](char prefix, std::size_t i) {
    return dim == 1 ? std::string(1, prefix) : prefix + std::to_string(i);
  };
  out += "t";
  for (std::size_t i = 0; i < dim; ++i) out += "," + column('x', i);
  if (traj.has_velocities())
    for (std::size_t i = 0; i < dim; ++i) out += "," + column('v', i);
  out += '\n';

  const auto& times = traj.grid().times();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += format_double(times[k]);
    for (double x : traj.position(k)) out += "," + format_double(x);
    if (traj.has_velocities())
      for (double v : traj.velocity(k)) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) { write_file_atomic(path, trajectory_csv(traj)); }

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    std::size_t start = cell.find_first_not_of(' ');
    cells.push_back(start == std::string::npos ? std::string() : cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw Error(ErrorKind::InvalidInput, source + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
  return value;
}

} // namespace

Trajectory parse_trajectory_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) header = split(line);
  }
  if (header.empty() || header[0] != "t")
    throw Error(ErrorKind::InvalidInput, source + ": trajectory header must start with 't'");

  std::size_t xcols = 0;
  std::size_t vcols = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const char p = header[c].empty() ? '\0' : header[c][0];
    if (p == 'x' && vcols == 0)
      ++xcols;
    else if (p == 'v')
      ++vcols;
    else
      throw Error(ErrorKind::InvalidInput, source + ":" + std::to_string(lineno) + ": unexpected column '" +
                                               header[c] + "'");
  }
  if (xcols == 0) throw Error(ErrorKind::InvalidInput, source + ": trajectory has no position column");
  if (vcols != 0 && vcols != xcols)
    throw Error(ErrorKind::InvalidInput, source + ": velocity columns must match position columns");

  std::vector<double> times;
  std::vector<double> xs;
  std::vector<double> vs;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw Error(ErrorKind::InvalidInput, source + ":" + std::to_string(lineno) + ": expected " +
                                               std::to_string(header.size()) + " columns, found " +
                                               std::to_string(cells.size()));
    times.push_back(parse_number(cells[0], source, lineno));
    for (std::size_t c = 0; c < xcols; ++c) xs.push_back(parse_number(cells[1 + c], source, lineno));
    for (std::size_t c = 0; c < vcols; ++c) vs.push_back(parse_number(cells[1 + xcols + c], source, lineno));
  }
  if (times.size() < 2) throw Error(ErrorKind::InvalidInput, source + ": trajectory needs at least two rows");

  std::optional<std::vector<double>> velocities;
  if (vcols) velocities = std::move(vs);
  try {
    return Trajectory(ObservationGrid(std::move(times), 1), xcols, std::move(xs), std::move(velocities));
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidInput, source + ": " + e.what());
  }
}

Trajectory read_trajectory_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open trajectory file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trajectory_csv(buf.str(), path.string());
}

std::string curve_csv(std::span<const CurvePoint> curve) {
  std::string out = "theta,objective\n";
  for (const CurvePoint& p : curve) out += format_double(p.theta) + "," + format_double(p.objective) + "\n";
  return out;
}

void write_curve_csv(const fs::path& path, std::span<const CurvePoint> curve) {
  write_file_atomic(path, curve_csv(curve));
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "mu,n,replicate,theta_hat,abs_error\n";
  for (const SweepRow& r : result.rows)
    out += format_double(r.mu) + "," + std::to_string(r.n) + "," + std::to_string(r.replicate) + "," +
           format_double(r.theta_hat) + "," + format_double(r.abs_error) + "\n";
  return out;
}

std::string sweep_diagnostics_csv(const SweepResult& result) {
  std::string out = "mu,n,sup_distance,uniform_gap\n";
  for (const SweepDiagnostic& d : result.diagnostics)
    out += format_double(d.mu) + "," + std::to_string(d.n) + "," + format_double(d.sup_distance) + "," +
           format_double(d.uniform_gap) + "\n";
  return out;
}

std::string gamma_csv(std::span<const GammaRow> rows) {
  std::string out = "mu,uniform_gap,sup_distance\n";
  for (const GammaRow& r : rows)
    out += format_double(r.mu) + "," + format_double(r.uniform_gap) + "," + format_double(r.sup_distance) + "\n";
  return out;
}

} // namespace kramers::io
