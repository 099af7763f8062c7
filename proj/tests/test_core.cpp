#include <doctest.h>

#include "core.hpp"
#include "philox.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace kramers;

TEST_SUITE("core") {

TEST_CASE("philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::apply(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, K{0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::apply(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, K{0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("normals are addressable by index") {
  std::vector<double> all(11);
  fill_standard_normals(7, 3, 0, all);
  std::vector<double> tail(6);
  fill_standard_normals(7, 3, 5, tail);
  for (std::size_t i = 0; i < tail.size(); ++i) CHECK(tail[i] == all[5 + i]);
}

TEST_CASE("noise path is deterministic and streams differ") {
  const auto grid = ObservationGrid::uniform(50, 0.1, 4);
  const auto a = make_noise_path(42, 0, grid);
  const auto b = make_noise_path(42, 0, grid);
  const auto c = make_noise_path(42, 1, grid);
  const auto d = make_noise_path(43, 0, grid);
  CHECK(a.increments() == b.increments());
  CHECK(a.increments() != c.increments());
  CHECK(a.increments() != d.increments());
  CHECK(a.substeps() == 200);
}

TEST_CASE("noise increments have variance delta") {
  const double dt = 0.01;
  const std::size_t n = 1000000;
  const auto noise = make_noise_path(2024, 5, ObservationGrid::uniform(n, dt, 1));
  double sum = 0.0, sq = 0.0;
  for (double w : noise.increments()) {
    sum += w;
    sq += w * w;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(var - dt) / dt < 0.01);
  CHECK(std::abs(mean) < 5.0 * std::sqrt(dt / n));
}

TEST_CASE("coarsened noise sums substeps") {
  const auto noise = make_noise_path(1, 2, ObservationGrid::uniform(3, 1.0, 4));
  const auto coarse = noise.coarsened(2);
  REQUIRE(coarse.substeps() == 6);
  for (std::size_t j = 0; j < 6; ++j)
    CHECK(coarse.at(j)[0] == doctest::Approx(noise.at(2 * j)[0] + noise.at(2 * j + 1)[0]).epsilon(1e-15));
  CHECK_THROWS_AS(noise.coarsened(5), Error);
}

TEST_CASE("effective gravity constant") {
  CHECK(ColloidalForce::default_g_eff() == doctest::Approx(0.00898188439660719).epsilon(1e-14));
}

TEST_CASE("drift evaluation examples") {
  const double g = 0.00898188439660719;
  const auto colloidal = colloidal_model();
  CHECK(eval_drift(colloidal, std::vector{0.0}, 0.02)[0] == doctest::Approx(0.02 - g).epsilon(1e-14));
  CHECK(eval_drift(colloidal, std::vector{18.0}, 0.02)[0] == doctest::Approx(0.02 / std::numbers::e - g).epsilon(1e-13));
  CHECK(eval_drift(ou_model(), std::vector{2.0}, 3.0)[0] == doctest::Approx(-6.0));
  CHECK(eval_drift(zero_drift_model(), std::vector{5.0}, 3.0)[0] == 0.0);
  CHECK(eval_drift(affine_theta_model(2.0, -1.0), std::vector{9.0}, 3.0)[0] == doctest::Approx(5.0));
  const auto ou2 = eval_drift(ou_model(2), std::vector{1.0, -2.0}, 0.5);
  CHECK(ou2[0] == doctest::Approx(-0.5));
  CHECK(ou2[1] == doctest::Approx(1.0));
}

TEST_CASE("colloidal force decreases in x for theta > 0") {
  const auto model = colloidal_model();
  double prev = eval_drift(model, std::vector{0.0}, 0.05)[0];
  for (double x = 0.5; x <= 200.0; x += 0.5) {
    const double cur = eval_drift(model, std::vector{x}, 0.05)[0];
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("linear decomposition reproduces the drift") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> xs(-50.0, 200.0);
  std::uniform_real_distribution<double> thetas(-3.0, 3.0);
  for (const auto& model : {colloidal_model(), ou_model(), affine_theta_model(0.7, -0.2)}) {
    REQUIRE(model.has_linear_decomposition());
    const auto& parts = model.linear();
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> x{xs(rng)};
      const double theta = thetas(rng);
      double b1 = 0.0, b0 = 0.0;
      parts.slope(x, std::span(&b1, 1));
      parts.offset(x, std::span(&b0, 1));
      const double direct = eval_drift(model, x, theta)[0];
      CHECK(std::abs(theta * b1 + b0 - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("nonlinear model has no decomposition") {
  DriftModel m("square", 1, [](std::span<const double> x, double theta, std::span<double> out) {
    out[0] = theta * theta * x[0];
  });
  CHECK_FALSE(m.has_linear_decomposition());
  CHECK_THROWS_AS(m.linear(), Error);
}

TEST_CASE("non-finite drift is a model evaluation error") {
  DriftModel m("bad", 1, [](std::span<const double>, double, std::span<double> out) { out[0] = std::nan(""); });
  try {
    eval_drift(m, std::vector{0.0}, 1.0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ModelEvaluation);
  }
}

TEST_CASE("system parameter validation names the field") {
  SystemParams p;
  p.mass = 0.0;
  try {
    p.validate();
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("mass") != std::string::npos);
  }
  p.mass = 1.0;
  p.friction = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.friction = 1.0;
  p.noise = -0.1;
  CHECK_THROWS_AS(p.validate(), Error);
  p.noise = 0.0;
  p.v0 = {0.0, 0.0};
  CHECK_THROWS_AS(p.validate(), Error);
  p.v0 = {0.0};
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("observation grid") {
  const auto g = ObservationGrid::uniform(4, 0.5, 3);
  CHECK(g.points() == 5);
  CHECK(g.intervals() == 4);
  CHECK(g.horizon() == doctest::Approx(2.0));
  CHECK(g.width(2) == doctest::Approx(0.5));
  CHECK(g.substep_width(1) == doctest::Approx(0.5 / 3));
  CHECK(g.total_substeps() == 12);
  CHECK(g.with_substeps(7).substeps() == 7);

  const ObservationGrid irregular({0.0, 0.1, 0.5, 0.6}, 2);
  CHECK(irregular.max_substep_width() == doctest::Approx(0.2));

  CHECK_THROWS_AS(ObservationGrid({0.1, 0.2}), Error);
  CHECK_THROWS_AS(ObservationGrid({0.0, 0.2, 0.2}), Error);
  CHECK_THROWS_AS(ObservationGrid({0.0}), Error);
  CHECK_THROWS_AS(ObservationGrid({0.0, 1.0}, 0), Error);
  CHECK_THROWS_AS(ObservationGrid::uniform(0, 0.1), Error);
  CHECK_THROWS_AS(ObservationGrid::uniform(3, -0.1), Error);
}

TEST_CASE("trajectory validates shape and values") {
  const auto g = ObservationGrid::uniform(2, 1.0);
  CHECK_NOTHROW(Trajectory(g, 1, {0.0, 1.0, 2.0}));
  CHECK_THROWS_AS(Trajectory(g, 1, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(Trajectory(g, 1, {0.0, std::nan(""), 2.0}), Error);
  CHECK_THROWS_AS(Trajectory(g, 1, {0.0, 1.0, 2.0}, std::vector<double>{1.0}), Error);
  const Trajectory t(g, 2, {0, 1, 2, 3, 4, 5});
  CHECK(t.position(1)[1] == 3.0);
  CHECK_FALSE(t.has_velocities());
}

} // TEST_SUITE
