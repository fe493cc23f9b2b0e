#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cyclefem/equilibrium.hpp"
#include "cyclefem/errors.hpp"
#include "cyclefem/hopf.hpp"
#include "cyclefem/luo_rudy.hpp"
#include "cyclefem/normal_form.hpp"
#include "reference_point.hpp"

using namespace cyclefem;
using luo_rudy::LuoRudyModel;

namespace {

Vector ref_state() { return Vector(reference::kU.begin(), reference::kU.end()); }

// Relative check with an absolute floor for entries that are (nearly) zero.
bool close(double got, double want, double rel, double abs_floor) {
  return std::abs(got - want) <= std::max(rel * std::abs(want), abs_floor);
}

}  // namespace

TEST_CASE("normal form: guess is the rotation eigenpair") {
  const HopfNormalForm nf(1.0);
  const HopfPoint g = hopf_initial_guess(nf, 0.0, Vector{0.0, 0.0});
  CHECK(g.k == 0);
  CHECK(g.beta == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(g.g_r[0] == 1.0);
  CHECK(std::abs(g.g_r[1]) <= 1e-13);
  CHECK(g.g_i[0] == 0.0);
  CHECK(g.g_i[1] == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("normal form: refinement lands exactly on (0, omega)") {
  const HopfNormalForm nf(2.0);
  HopfPoint g = hopf_initial_guess(nf, 0.05, Vector{0.01, -0.02});
  const HopfPoint p = refine_hopf(nf, g);
  CHECK(std::abs(p.lambda) <= 1e-12);
  CHECK(std::abs(p.beta - 2.0) <= 1e-12);
  CHECK(p.period() == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("not-a-Hopf conditions") {
  const LuoRudyModel model;
  const Vector rest{-84.0, 2e-4, 0.98, 0.98, 0.002, 0.003, 1.0, 0.006};
  const Vector u = newton_equilibrium(model, 0.0, rest).u;
  CHECK_THROWS_AS(hopf_initial_guess(model, 0.0, u), NotHopfError);
  const HopfNormalForm nf;
  CHECK_THROWS_AS(hopf_initial_guess(nf, 0.5, Vector{0.0, 0.0}), NotHopfError);
}

TEST_CASE("Luo-Rudy guess near the reference point") {
  const LuoRudyModel model;
  const HopfPoint g = hopf_initial_guess(model, reference::kLambda, ref_state());
  CHECK(g.k == 0);
  CHECK(std::abs(g.beta - reference::kBeta) <= 1e-3);
  CHECK(g.g_r[0] == 1.0);
  CHECK(g.g_i[0] == 0.0);
  // Substitution check of the eigen-rows.
  const Vector r = hopf_residual(model, g);
  double eig_rows = 0.0;
  for (std::size_t i = 8; i < 24; ++i) eig_rows = std::max(eig_rows, std::abs(r[i]));
  CHECK(eig_rows <= 1e-6);
}

TEST_CASE("Luo-Rudy refinement reproduces the reference solution") {
  const LuoRudyModel model;
  const HopfPoint p = refine_hopf(model, hopf_initial_guess(model, reference::kLambda, ref_state()));
  CHECK(p.residual <= 1e-8);
  CHECK(norm_inf(hopf_residual(model, p)) <= 1e-8);
  CHECK(close(p.lambda, reference::kLambda, 1e-4, 0.0));
  CHECK(close(p.beta, reference::kBeta, 1e-4, 0.0));
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK_MESSAGE(close(p.u[i], reference::kU[i], 1e-4, 1e-6), "u " << i);
    CHECK_MESSAGE(close(p.g_r[i], reference::kGr[i], 1e-4, 1e-6), "g_r " << i);
    CHECK_MESSAGE(close(p.g_i[i], reference::kGi[i], 1e-4, 1e-6), "g_i " << i);
  }
  // The pair +-i beta is in the spectrum at the refined point.
  bool found = false;
  for (const Complex& z : eigenvalues_qr(model.jac_u(p.lambda, p.u)))
    found = found || std::abs(z - Complex(0.0, p.beta)) <= 1e-6;
  CHECK(found);
  CHECK(std::isfinite(p.period()));
  CHECK(p.period() == doctest::Approx(385.74).epsilon(1e-3));
}

TEST_CASE("refined point does not depend on the normalization index") {
  const LuoRudyModel model;
  HopfGuessOptions a, b;
  a.k = 0;
  b.k = 5;
  const HopfPoint pa = refine_hopf(model, hopf_initial_guess(model, reference::kLambda, ref_state(), a));
  const HopfPoint pb = refine_hopf(model, hopf_initial_guess(model, reference::kLambda, ref_state(), b));
  CHECK(pb.k == 5);
  CHECK(pb.g_r[5] == 1.0);
  CHECK(pb.g_i[5] == 0.0);
  CHECK(std::abs(pa.lambda - pb.lambda) <= 1e-8);
  CHECK(std::abs(pa.beta - pb.beta) <= 1e-8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(pa.u[i] - pb.u[i]) <= 1e-8);
  // g_b = g_a / g_a[5] as complex vectors.
  const Complex s(pa.g_r[5], pa.g_i[5]);
  for (std::size_t i = 0; i < 8; ++i) {
    const Complex q = Complex(pa.g_r[i], pa.g_i[i]) / s;
    CHECK(std::abs(q - Complex(pb.g_r[i], pb.g_i[i])) <= 1e-6);
  }
}

TEST_CASE("vanishing normalization component is rejected") {
  const LuoRudyModel model;
  HopfGuessOptions opt;
  opt.k = 2;  // h: the eigenvector component is exactly zero
  CHECK_THROWS_AS(hopf_initial_guess(model, reference::kLambda, ref_state(), opt), NotHopfError);
}

TEST_CASE("Hopf point text round trip") {
  const HopfNormalForm nf(1.0);
  const HopfPoint p = refine_hopf(nf, hopf_initial_guess(nf, 0.01, Vector{0.0, 0.0}));
  std::stringstream ss;
  write_hopf_point(ss, p);
  const HopfPoint q = read_hopf_point(ss);
  CHECK(q.lambda == p.lambda);
  CHECK(q.beta == p.beta);
  CHECK(q.k == p.k);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(q.u[i] == p.u[i]);
    CHECK(q.g_r[i] == p.g_r[i]);
    CHECK(q.g_i[i] == p.g_i[i]);
  }
  std::istringstream bad("lambda = 0\nbeta = -1\nk = 1\nu = 0, 0\ng_r = 1, 0\ng_i = 0, -1\n");
  CHECK_THROWS_AS(read_hopf_point(bad), IoError);
  std::istringstream missing("lambda = 0\n");
  CHECK_THROWS_AS(read_hopf_point(missing), IoError);
}
