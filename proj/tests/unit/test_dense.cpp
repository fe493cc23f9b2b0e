#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cyclefem/dense.hpp"
#include "cyclefem/errors.hpp"
#include "cyclefem/quadrature.hpp"

using namespace cyclefem;

namespace {

DenseMatrix random_well_conditioned(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a(r, c) = dist(rng);
    a(r, r) += static_cast<double>(n);  // diagonally dominant
  }
  return a;
}

// Sort eigenvalues so that lists from different algorithms line up.
ComplexEigenvalueList sorted(ComplexEigenvalueList v) {
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

double adaptive_simpson(const auto& f, double a, double b, double tol, int depth = 0) {
  const double c = 0.5 * (a + b);
  const double whole = (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
  const double left = (c - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + c)) + f(c));
  const double right = (b - c) / 6.0 * (f(c) + 4.0 * f(0.5 * (c + b)) + f(b));
  if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, c, tol / 2.0, depth + 1) +
         adaptive_simpson(f, c, b, tol / 2.0, depth + 1);
}

}  // namespace

TEST_CASE("lu_solve: identity returns the right-hand side") {
  const DenseMatrix eye = DenseMatrix::identity(5);
  const Vector b{1.0, -2.0, 3.5, 0.0, 7.25};
  const Vector x = lu_solve(eye, b);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(x[i] == b[i]);
}

TEST_CASE("lu_solve: diagonal system") {
  DenseMatrix a(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  const Vector x = lu_solve(a, Vector{2.0, 8.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("lu_solve: random 50x50 residual against multiplication") {
  std::mt19937_64 rng(20101010);
  const DenseMatrix a = random_well_conditioned(50, rng);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  Vector b(50);
  for (double& v : b) v = dist(rng);
  const Vector x = lu_solve(a, b);
  const Vector ax = a.multiply(x);
  double res = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) res = std::max(res, std::abs(ax[i] - b[i]));
  CHECK(res <= 1e-10 * (a.norm_inf() * norm_inf(x) + norm_inf(b)));
}

TEST_CASE("lu_solve: round trip recovers x from A x") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) * 3;
    const DenseMatrix a = random_well_conditioned(n, rng);
    Vector x(n);
    for (double& v : x) v = dist(rng);
    const Vector back = lu_solve(a, a.multiply(x));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(back[i] - x[i]) <= 1e-8 * std::max(1.0, std::abs(x[i])));
  }
}

TEST_CASE("lu_solve: singular matrix reports the pivot") {
  DenseMatrix a(3, 3);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;  // rank-deficient leading block
  a(2, 2) = 1.0;
  try {
    lu_solve(a, Vector{1.0, 1.0, 1.0});
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.pivot() == 1);
  }
}

TEST_CASE("eigenvalues_qr: diagonal and rotation generator") {
  DenseMatrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  const auto ev = sorted(eigenvalues_qr(d));
  REQUIRE(ev.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(ev[i].real() == doctest::Approx(i + 1.0).epsilon(1e-14));
    CHECK(ev[i].imag() == 0.0);
  }

  DenseMatrix rot(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const auto er = eigenvalues_qr(rot);
  REQUIRE(er.size() == 2);
  CHECK(std::abs(er[0] - Complex(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(er[1] - Complex(0.0, -1.0)) < 1e-14);
}

TEST_CASE("eigenvalues_qr: agrees with Eigen on random nonsymmetric matrices") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 11;
    DenseMatrix a(n, n);
    Eigen::MatrixXd e(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) e(r, c) = a(r, c) = dist(rng);
    const auto ours = sorted(eigenvalues_qr(a));
    Eigen::EigenSolver<Eigen::MatrixXd> solver(e, false);
    ComplexEigenvalueList ref(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    ref = sorted(ref);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ours[i] - ref[i]) < 1e-9);
  }
}

TEST_CASE("eigenvalues_qr: conjugate pairs come out adjacent") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix a(9, 9);
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 9; ++c) a(r, c) = dist(rng);
  const auto ev = eigenvalues_qr(a);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].imag() > 0.0) {
      REQUIRE(i + 1 < ev.size());
      CHECK(ev[i + 1] == std::conj(ev[i]));
      ++i;
    } else {
      CHECK(ev[i].imag() == 0.0);
    }
  }
}

TEST_CASE("eigenvalues_qr: invariant under permutation similarity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const std::size_t n = 8;
  DenseMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = dist(rng);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  DenseMatrix b(n, n);  // P^-1 A P
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) b(r, c) = a(perm[r], perm[c]);
  const auto ea = sorted(eigenvalues_qr(a));
  const auto eb = sorted(eigenvalues_qr(b));
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ea[i] - eb[i]) < 1e-8);
}

TEST_CASE("eigenvector_inverse_iteration recovers the rotation eigenvector") {
  DenseMatrix rot(2, 2);
  rot(0, 1) = -2.0;
  rot(1, 0) = 2.0;
  const ComplexVector g = eigenvector_inverse_iteration(rot, Complex(0.0, 2.0));
  // rot g = 2i g
  const Complex r0 = rot(0, 1) * g[1] - Complex(0.0, 2.0) * g[0];
  const Complex r1 = rot(1, 0) * g[0] - Complex(0.0, 2.0) * g[1];
  CHECK(std::abs(r0) < 1e-10);
  CHECK(std::abs(r1) < 1e-10);
}

TEST_CASE("hessenberg_reduce zeroes entries below the subdiagonal") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix a(6, 6);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) a(r, c) = dist(rng);
  const DenseMatrix h = hessenberg_reduce(a);
  for (std::size_t r = 2; r < 6; ++r)
    for (std::size_t c = 0; c + 1 < r; ++c) CHECK(h(r, c) == 0.0);
  double trace_a = 0.0, trace_h = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    trace_a += a(i, i);
    trace_h += h(i, i);
  }
  CHECK(trace_h == doctest::Approx(trace_a).epsilon(1e-13));
}

TEST_CASE("gauss3_integrate: exactness and rule error") {
  CHECK(gauss3_integrate([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(gauss3_integrate([](double t) { return std::pow(t, 5); }, 0.0, 1.0) - 1.0 / 6.0) <=
        1e-15);

  // sin(2 pi t) on [0,1] in one panel: the 3-point rule is not exact, but on
  // n panels the error must fall like h^6.
  const auto f = [](double t) { return std::sin(2.0 * std::numbers::pi * t + 0.3); };
  const double ref = adaptive_simpson(f, 0.0, 1.0, 1e-14);
  CHECK(std::abs(ref) < 1e-12);
  double prev_err = 0.0;
  for (int panels : {4, 8, 16}) {
    double acc = 0.0;
    for (int k = 0; k < panels; ++k)
      acc += gauss3_integrate(f, static_cast<double>(k) / panels, static_cast<double>(k + 1) / panels);
    const double err = std::abs(acc - ref);
    if (prev_err > 1e-14) CHECK(prev_err / std::max(err, 1e-300) > 32.0);
    prev_err = err;
  }
}

TEST_CASE("gauss3_integrate: linear in f and additive over splits") {
  const auto f = [](double t) { return std::exp(t) * std::cos(3.0 * t); };
  const auto g = [](double t) { return t * t * t - 2.0 * t; };
  const double a = gauss3_integrate(f, -0.4, 0.9);
  const double b = gauss3_integrate(g, -0.4, 0.9);
  const double combo = gauss3_integrate([&](double t) { return 2.5 * f(t) - 0.75 * g(t); }, -0.4, 0.9);
  CHECK(combo == doctest::Approx(2.5 * a - 0.75 * b).epsilon(1e-14));

  // Additivity holds exactly only where the rule is exact.
  const double whole = gauss3_integrate(g, -0.4, 0.9);
  const double split = gauss3_integrate(g, -0.4, 0.2) + gauss3_integrate(g, 0.2, 0.9);
  CHECK(whole == doctest::Approx(split).epsilon(1e-14));
}
