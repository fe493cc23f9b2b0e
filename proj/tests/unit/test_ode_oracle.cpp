#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cyclefem/equilibrium.hpp"
#include "cyclefem/luo_rudy.hpp"
#include "cyclefem/normal_form.hpp"
#include "cyclefem/ode_oracle.hpp"
#include "reference_point.hpp"

using namespace cyclefem;

TEST_CASE("equilibrium stays put") {
  const luo_rudy::LuoRudyModel model;
  const Vector u = newton_equilibrium(model, reference::kLambda, Vector(reference::kU.begin(), reference::kU.end())).u;
  const Trajectory traj = integrate(model, reference::kLambda, u, 1e3, 0.01, 1000);
  for (const Vector& s : traj.states)
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(s[i] - u[i]) <= 1e-8);
}

TEST_CASE("normal form settles on the circle of radius sqrt(lambda)") {
  const HopfNormalForm nf(1.0);
  const Trajectory traj = integrate(nf, 0.25, Vector{0.1, 0.0}, 200.0, 0.01);
  const Vector& end = traj.states.back();
  CHECK(std::hypot(end[0], end[1]) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(traj.t.size() == 20001);
  CHECK(traj.t.back() == doctest::Approx(200.0));
  for (std::size_t i = 1; i < traj.t.size(); ++i) CHECK(traj.t[i] > traj.t[i - 1]);

  const auto period = measure_period(traj, 0, 100.0);
  REQUIRE(period);
  CHECK(*period == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("RK4 is fourth order") {
  const HopfNormalForm nf(1.0);
  const Vector u0{0.3, -0.2};
  const auto end = [&](double dt) { return integrate(nf, 0.25, u0, 5.0, dt).states.back(); };
  const Vector ref = end(0.1 / 64.0);
  const Vector a = end(0.1), b = end(0.05), c = end(0.025);
  const auto err = [&](const Vector& v) { return std::hypot(v[0] - ref[0], v[1] - ref[1]); };
  CHECK(err(a) / err(b) == doctest::Approx(16.0).epsilon(0.1));
  CHECK(err(b) / err(c) == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("period of a synthetic sine") {
  Trajectory traj;
  const double T = 3.7;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 0.01 * i;
    traj.t.push_back(t);
    traj.states.push_back({std::sin(2.0 * std::numbers::pi * t / T)});
  }
  const auto p = measure_period(traj, 0, 0.0);
  REQUIRE(p);
  CHECK(std::abs(*p - T) <= 1e-3 * T);

  Trajectory flat;
  for (int i = 0; i < 100; ++i) {
    flat.t.push_back(i);
    flat.states.push_back({std::exp(-0.1 * i)});
  }
  CHECK_FALSE(measure_period(flat, 0, 0.0));
}

TEST_CASE("integration is deterministic and records with a stride") {
  const HopfNormalForm nf(1.3);
  const Trajectory a = integrate(nf, 0.1, Vector{0.2, 0.1}, 10.0, 0.01, 7);
  const Trajectory b = integrate(nf, 0.1, Vector{0.2, 0.1}, 10.0, 0.01, 7);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i] == b.states[i]);
  CHECK(a.steps == 1000);
  CHECK(a.t.back() == doctest::Approx(10.0));
  CHECK(a.max_step_error > 0.0);
  CHECK(a.max_step_error < 1e-9);
}

TEST_CASE("leaving the domain reports the last good state") {
  const luo_rudy::LuoRudyModel model;
  Vector u(reference::kU.begin(), reference::kU.end());
  u[luo_rudy::kCa] = 1e-12;
  u[luo_rudy::kD] = 1.0;
  u[luo_rudy::kF] = 1.0;
  try {
    integrate(model, 0.0, u, 100.0, 1.0);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.last_good_state().size() == 8);
  }
  CHECK_THROWS_AS(integrate(model, 0.0, u, 1.0, -0.1), ConfigError);
}
