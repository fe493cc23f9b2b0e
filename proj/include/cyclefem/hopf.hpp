#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclefem/model.hpp"

namespace cyclefem {

/// Solution of the Hopf system
///   F(lambda, u) = 0,  J g_r + beta g_i = 0,  J g_i - beta g_r = 0,
///   g_r[k] = 1,  g_i[k] = 0,
/// where J = D_u F(lambda, u) and J (g_r + i g_i) = i beta (g_r + i g_i).
struct HopfPoint {
  double lambda = 0.0;
  double beta = 0.0;
  Vector u;
  Vector g_r;
  Vector g_i;
  std::size_t k = 0;  // 0-based normalization index
  double residual = 0.0;

  double period() const;
};

/// Residual of the 3n + 2 Hopf equations in the order above.
Vector hopf_residual(const ModelSystem& model, const HopfPoint& p);

struct HopfGuessOptions {
  std::optional<std::size_t> k;   // default: largest |g_j|
  double axis_tolerance = 0.1;    // accept |Re mu| <= axis_tolerance * |Im mu|
};

/// Starting iterate from the complex pair nearest the imaginary axis and
/// its eigenvector, scaled so g[k] = 1. Throws NotHopfError.
HopfPoint hopf_initial_guess(const ModelSystem& model, double lambda, std::span<const double> u,
                             const HopfGuessOptions& options = {});

struct HopfRefineOptions {
  double tol = 1e-10;  // on the residual inf-norm
  int max_iter = 25;
  double fd_step = 1e-6;  // relative step for the second-derivative terms
};

/// Newton on the Hopf system. The terms D_u(J g) and D_lambda(J g) are taken
/// by central differences of jac_u. Keeps beta > 0 by flipping (beta, g_i).
HopfPoint refine_hopf(const ModelSystem& model, HopfPoint iterate, const HopfRefineOptions& options = {});

/// key = value lines: lambda, beta, period, residual, k (1-based), then
/// u, g_r, g_i as comma-separated lists. Full double precision.
void write_hopf_point(std::ostream& out, const HopfPoint& p);
HopfPoint read_hopf_point(std::istream& in);

}  // namespace cyclefem
