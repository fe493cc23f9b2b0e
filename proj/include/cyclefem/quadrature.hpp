#pragma once

#include <array>
#include <cmath>
#include <concepts>

namespace cyclefem {

/// Three-point Gauss-Legendre rule on the reference interval [0, 1].
struct Gauss3 {
  static constexpr int kPoints = 3;
  static constexpr std::array<double, 3> abscissae{
      0.5 - 0.3872983346207416885179265,  // (1 - sqrt(3/5)) / 2
      0.5,
      0.5 + 0.3872983346207416885179265,
  };
  static constexpr std::array<double, 3> weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
};

/// Integrate f over [t_lo, t_hi] with the three-point Gauss rule. Exact for
/// polynomials of degree <= 5.
template <class F>
  requires std::invocable<F&, double>
double gauss3_integrate(F&& f, double t_lo, double t_hi) {
  const double h = t_hi - t_lo;
  double acc = 0.0;
  for (int q = 0; q < Gauss3::kPoints; ++q)
    acc += Gauss3::weights[q] * f(t_lo + h * Gauss3::abscissae[q]);
  return h * acc;
}

}  // namespace cyclefem
