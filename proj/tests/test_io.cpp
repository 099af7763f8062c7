#include <doctest.h>

#include "csv_io.hpp"
#include "simulate.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace kramers;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("kramers_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    io::parse_trajectory_csv(text, "data.csv");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    return e.what();
  }
  return "";
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("trajectory csv round-trip is exact") {
  for (std::uint64_t stream = 0; stream < 5; ++stream) {
    SystemParams p;
    p.mass = 1e-2;
    p.noise = 3.0;
    const ObservationGrid grid({0.0, 0.013, 0.1, 0.25, 1.0 / 3.0, 7.0}, 5);
    const auto t = simulate_underdamped(colloidal_model(), 0.02, p, grid, {}, make_noise_path(1, stream, grid));
    const auto back = io::parse_trajectory_csv(io::trajectory_csv(t));
    CHECK(back.grid().times() == t.grid().times());
    CHECK(back.positions() == t.positions());
    REQUIRE(back.has_velocities());
    CHECK(*back.velocities() == *t.velocities());
  }
  const Trajectory two(ObservationGrid::uniform(2, 0.5), 2, {0, 1, 2, 3, 4, 5});
  const auto text = io::trajectory_csv(two);
  CHECK(text.rfind("t,x0,x1\n", 0) == 0);
  CHECK(io::parse_trajectory_csv(text).positions() == two.positions());
}

TEST_CASE("trajectory csv header") {
  const Trajectory t(ObservationGrid::uniform(1, 0.5), 1, {1.0, 2.0});
  CHECK(io::trajectory_csv(t) == "t,x\n0,1\n0.5,2\n");
}

TEST_CASE("parse accepts CRLF and blank lines") {
  const auto t = io::parse_trajectory_csv("t,x\r\n0,1\r\n\r\n1,2\r\n");
  CHECK(t.size() == 2);
  CHECK(t.position(1)[0] == 2.0);
}

TEST_CASE("parse errors carry the location") {
  CHECK(error_of("t,x\n0,1\n1,abc\n").find("data.csv:3") != std::string::npos);
  CHECK(error_of("t,x\n0,1\n1,2,3\n").find("data.csv:3") != std::string::npos);
  CHECK(error_of("time,x\n0,1\n1,2\n").find("header") != std::string::npos);
  CHECK(error_of("t,x\n0,1\n").find("two rows") != std::string::npos);
  CHECK(error_of("t,x\n0,1\n0,2\n").find("data.csv") != std::string::npos);
  CHECK(error_of("t,x,q\n0,1,1\n1,2,2\n").find("unexpected column") != std::string::npos);
  CHECK_FALSE(error_of("t,x\n0,1\n1,nan\n").empty());
}

TEST_CASE("file writers and readers") {
  const fs::path dir = scratch_dir();
  const Trajectory t(ObservationGrid::uniform(3, 0.25), 1, {0.0, 0.1, 0.2, 0.3});
  io::write_trajectory_csv(dir / "t.csv", t);
  CHECK(io::read_trajectory_csv(dir / "t.csv").positions() == t.positions());
  for (const auto& entry : fs::directory_iterator(dir))
    CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);

  try {
    io::read_trajectory_csv(dir / "missing.csv");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  CHECK_THROWS_AS(io::write_file_atomic(dir / "no" / "such" / "dir.csv", "x"), Error);

  const std::vector<CurvePoint> curve{{0.0, 2.0}, {0.5, 1.25}};
  io::write_curve_csv(dir / "c.csv", curve);
  CHECK(slurp(dir / "c.csv") == "theta,objective\n0,2\n0.5,1.25\n");
  fs::remove_all(dir);
}

TEST_CASE("sweep and gamma tables") {
  SweepResult r;
  r.rows.push_back({0.01, 100, 2, 1.25, 0.25, ""});
  r.rows.push_back({0.01, 100, 3, std::nan(""), std::nan(""), "diverged"});
  r.diagnostics.push_back({0.01, 100, 0.5, 2.0, ""});
  CHECK(io::sweep_csv(r) == "mu,n,replicate,theta_hat,abs_error\n0.01,100,2,1.25,0.25\n0.01,100,3,nan,nan\n");
  CHECK(io::sweep_diagnostics_csv(r) == "mu,n,sup_distance,uniform_gap\n0.01,100,0.5,2\n");
  const std::vector<GammaRow> rows{{0.1, 3.0, 0.5}};
  CHECK(io::gamma_csv(rows) == "mu,uniform_gap,sup_distance\n0.1,3,0.5\n");
}

} // TEST_SUITE
