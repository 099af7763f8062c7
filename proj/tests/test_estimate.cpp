#include <doctest.h>

#include "estimate.hpp"
#include "simulate.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace kramers;

namespace {

Trajectory two_point(double dx, double dt = 1.0) {
  return Trajectory(ObservationGrid({0.0, dt}), 1, {0.0, dx});
}

Trajectory ou_data(std::uint64_t stream, double theta = 1.0, std::size_t n = 500, double sigma = 1.0,
                   double x0 = 0.5) {
  SystemParams p;
  p.noise = sigma;
  p.x0 = {x0};
  const auto grid = ObservationGrid::uniform(n, 0.1, 4);
  return simulate_overdamped(ou_model(), theta, p, grid, {}, make_noise_path(31, stream, grid));
}

// Plain double-precision reference for the objective.
double reference_objective(const Trajectory& t, const DriftModel& m, double gamma, double theta) {
  double total = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double dt = t.grid().width(k);
    double b = 0.0;
    m.eval(t.position(k - 1), theta, std::span(&b, 1));
    const double r = t.position(k)[0] - t.position(k - 1)[0] - b * dt / gamma;
    total += r * r / dt;
  }
  return total;
}

DriftModel exp_ou_model() {
  return DriftModel("exp-ou", 1, [](std::span<const double> x, double theta, std::span<double> out) {
    out[0] = -std::exp(theta) * x[0];
  });
}

} // namespace

TEST_SUITE("estimate") {

TEST_CASE("objective hand case") {
  const auto t = two_point(1.0);
  const auto m = affine_theta_model(1.0, 0.0);
  CHECK(objective(t, m, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(objective(t, m, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(objective(t, m, 1.0, 3.0) == doctest::Approx(4.0));
  // dt = 0.5, gamma = 2: residual 1 - theta / 4, weight 2
  CHECK(objective(two_point(1.0, 0.5), m, 2.0, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("objective matches an independent sum") {
  const auto t = ou_data(1);
  for (double theta : {0.0, 0.3, 1.0, 2.7})
    CHECK(objective(t, ou_model(), 1.0, theta) ==
          doctest::Approx(reference_objective(t, ou_model(), 1.0, theta)).epsilon(1e-12));
  const auto c = colloidal_model();
  CHECK(objective(t, c, 1.0 / 6.0, 0.02) == doctest::Approx(reference_objective(t, c, 1.0 / 6.0, 0.02)).epsilon(1e-12));
}

TEST_CASE("objective is non-negative") {
  const auto t = ou_data(2);
  for (double theta = -2.0; theta <= 4.0; theta += 0.25) CHECK(objective(t, ou_model(), 1.0, theta) >= 0.0);
}

TEST_CASE("closed form hand case and clipping") {
  const auto t = two_point(1.0);
  const auto m = affine_theta_model(1.0, 0.0);
  const auto inside = minimize_closed_form(t, m, 1.0, {0.0, 5.0});
  CHECK(inside.theta_hat == doctest::Approx(1.0));
  CHECK(inside.objective_at_min == doctest::Approx(0.0));
  CHECK_FALSE(inside.at_boundary);
  CHECK(inside.method == Method::ClosedForm);

  const auto clipped = minimize_closed_form(t, m, 1.0, {0.0, 0.5});
  CHECK(clipped.theta_hat == 0.5);
  CHECK(clipped.at_boundary);
  CHECK(clipped.objective_at_min == doctest::Approx(0.25));
}

TEST_CASE("zero drift slope is not identifiable") {
  try {
    minimize_closed_form(two_point(1.0), zero_drift_model(), 1.0, {0.0, 1.0});
    FAIL("expected identifiability error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Identifiability);
  }
}

TEST_CASE("closed form needs a linear model") {
  try {
    minimize_closed_form(ou_data(3), exp_ou_model(), 1.0, {-2.0, 2.0});
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("parameter space validation") {
  CHECK_THROWS_AS(ParameterSpace({1.0, 0.0}).validate(), Error);
  CHECK_THROWS_AS(ParameterSpace({0.0, INFINITY}).validate(), Error);
  CHECK_THROWS_AS(minimize_golden(two_point(1.0), ou_model(), 1.0, {0.0, 1.0}, 0.0), Error);
  CHECK(ParameterSpace{0.0, 1.0}.contains(1.0));
  CHECK_FALSE(ParameterSpace{0.0, 1.0}.contains(1.5));
}

TEST_CASE("objective is an exact quadratic for linear drifts") {
  const auto t = ou_data(4);
  const auto f = [&](double th) { return objective(t, ou_model(), 1.0, th); };
  const double f0 = f(0.0), f1 = f(1.0), fm = f(-1.0);
  const double a = 0.5 * (f1 + fm) - f0;
  const double b = 0.5 * (f1 - fm);
  for (int i = 0; i < 20; ++i) {
    const double th = -3.0 + 0.37 * i;
    const double q = a * th * th + b * th + f0;
    CHECK(f(th) == doctest::Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("closed form agrees with golden section") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto t = ou_data(100 + s);
    const auto cf = minimize_closed_form(t, ou_model(), 1.0, {0.0, 5.0});
    const auto gs = minimize_golden(t, ou_model(), 1.0, {0.0, 5.0}, 1e-12);
    REQUIRE_FALSE(cf.at_boundary);
    CHECK(std::abs(cf.theta_hat - gs.theta_hat) < 1e-8);
    CHECK(gs.method == Method::GoldenSection);
    CHECK(gs.objective_at_min == doctest::Approx(objective(t, ou_model(), 1.0, gs.theta_hat)).epsilon(1e-12));
  }
}

TEST_CASE("reparametrised drift gives the transformed estimate") {
  const auto t = ou_data(5);
  const auto cf = minimize_closed_form(t, ou_model(), 1.0, {0.01, 5.0});
  const auto gs = minimize_golden(t, exp_ou_model(), 1.0, {-3.0, 1.5}, 1e-12);
  CHECK(gs.theta_hat == doctest::Approx(std::log(cf.theta_hat)).epsilon(1e-7));
}

TEST_CASE("time rescaling with friction leaves the estimate unchanged") {
  const auto t = ou_data(6);
  const auto base = minimize_closed_form(t, colloidal_model(), 1.0, {-10.0, 10.0});
  for (double c : {0.25, 3.0, 40.0}) {
    std::vector<double> times = t.grid().times();
    for (double& v : times) v *= c;
    const Trajectory scaled(ObservationGrid(times), 1, t.positions());
    const auto est = minimize_closed_form(scaled, colloidal_model(), c, {-10.0, 10.0});
    CHECK(est.theta_hat == doctest::Approx(base.theta_hat).epsilon(1e-10));
  }
}

TEST_CASE("noise-free data recovers the true parameter") {
  SystemParams p;
  p.friction = 1.0 / 6.0;
  p.noise = 0.0;
  p.x0 = {1.0};
  const auto grid = ObservationGrid::uniform(2000, 0.01, 1);
  const auto noise = make_noise_path(1, 0, grid);
  const auto colloidal = simulate_overdamped(colloidal_model(), 0.02, p, grid, {}, noise);
  CHECK(std::abs(minimize_closed_form(colloidal, colloidal_model(), p.friction, {0.0, 0.1}).theta_hat - 0.02) < 1e-10);
  CHECK(std::abs(minimize_golden(colloidal, colloidal_model(), p.friction, {0.0, 0.1}, 1e-12).theta_hat - 0.02) <
        1e-10);

  p.friction = 1.0;
  const auto ou = simulate_overdamped(ou_model(), 1.3, p, grid, {}, noise);
  CHECK(std::abs(minimize_closed_form(ou, ou_model(), 1.0, {0.0, 5.0}).theta_hat - 1.3) < 1e-10);
}

TEST_CASE("golden section from several brackets") {
  const auto f = [](double x) { return (x - 0.3) * (x - 0.3); };
  for (auto [lo, hi] : {std::pair{0.0, 1.0}, std::pair{-2.0, 0.5}, std::pair{0.1, 5.0}}) {
    const auto m = golden_section_search(f, lo, hi, 1e-12);
    CHECK(std::abs(m.argmin - 0.3) < 1e-8);
    CHECK(m.value < 1e-16);
    CHECK(m.evaluations > 0);
  }
  const auto edge = golden_section_search([](double x) { return x; }, 0.0, 1.0, 1e-10);
  CHECK(edge.argmin < 1e-9);
}

TEST_CASE("boundary minimiser is flagged") {
  const auto t = ou_data(7, 2.0);
  const auto gs = minimize_golden(t, ou_model(), 1.0, {0.0, 0.5}, 1e-10);
  CHECK(gs.theta_hat == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(gs.at_boundary);
}

TEST_CASE("objective curve") {
  const auto t = ou_data(8);
  const auto curve = objective_curve(t, ou_model(), 1.0, 0.0, 2.0, 21);
  REQUIRE(curve.size() == 21);
  CHECK(curve.front().theta == 0.0);
  CHECK(curve.back().theta == 2.0);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i) CHECK(curve[i].theta > curve[i - 1].theta);
    CHECK(curve[i].objective == objective(t, ou_model(), 1.0, curve[i].theta));
  }
  CHECK_THROWS_AS(objective_curve(t, ou_model(), 1.0, 0.0, 2.0, 1), Error);
}

TEST_CASE("uniform objective gap") {
  const auto a = ou_data(9);
  CHECK(uniform_objective_gap(a, a, ou_model(), 1.0, {0.0, 5.0}) == 0.0);

  SystemParams p;
  p.mass = 0.05;
  p.noise = 1.0;
  p.x0 = {0.5};
  const auto grid = ObservationGrid::uniform(500, 0.1, 4);
  const auto r = simulate_coupled(ou_model(), 1.0, p, grid, {}, make_noise_path(31, 9, grid));
  const double fine = uniform_objective_gap(r.underdamped, r.overdamped, ou_model(), 1.0, {0.0, 5.0}, 1001);
  const double coarse = uniform_objective_gap(r.underdamped, r.overdamped, ou_model(), 1.0, {0.0, 5.0}, 101);
  CHECK(fine > 0.0);
  CHECK(std::abs(fine - coarse) / fine < 0.1);

  // Independent maximum over the same grid.
  double best = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double th = 5.0 * i / 100.0;
    best = std::max(best, std::abs(reference_objective(r.underdamped, ou_model(), 1.0, th) -
                                   reference_objective(r.overdamped, ou_model(), 1.0, th)));
  }
  CHECK(coarse == doctest::Approx(best).epsilon(1e-9));

  const Trajectory other(ObservationGrid::uniform(500, 0.2), 1, a.positions());
  CHECK_THROWS_AS(uniform_objective_gap(a, other, ou_model(), 1.0, {0.0, 5.0}), Error);
}

} // TEST_SUITE
