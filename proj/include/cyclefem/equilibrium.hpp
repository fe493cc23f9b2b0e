#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclefem/model.hpp"

namespace cyclefem {

struct NewtonOptions {
  double tol = 1e-10;  // on ||F||_inf
  int max_iter = 25;
};

struct NewtonReport {
  Vector u;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;  // ||F||_inf before each step and at the end
};

/// Plain Newton on F(lambda, .) = 0. Throws SingularMatrixError, or
/// ConvergenceError when max_iter is hit or the residual grows three times
/// in a row.
NewtonReport newton_equilibrium(const ModelSystem& model, double lambda, std::span<const double> guess,
                                const NewtonOptions& options = {});

struct SearchBox {
  Vector lower;
  Vector upper;
};

/// Damped Gauss-Newton on ||F||^2, projected onto the box, from a lattice of
/// starts (centre first, then every combination of 1/4, 1/2, 3/4 of each
/// side). Returns the first point with ||F||_inf <= 1e-8; throws
/// ConvergenceError naming the best candidate otherwise.
Vector find_initial_equilibrium(const ModelSystem& model, double lambda, const SearchBox& box);

/// Maximum real part over eigenvalues with nonzero imaginary part; nullopt
/// when the spectrum is real.
std::optional<double> hopf_test_function(const ModelSystem& model, double lambda, std::span<const double> u);

struct EquilibriumPoint {
  double lambda = 0.0;
  Vector u;
  std::optional<double> test_function;
};

struct EquilibriumBranch {
  std::vector<EquilibriumPoint> points;
  double ds = 0.0;
  int direction = -1;  // sign of the first lambda step
  std::optional<std::string> failure;
  std::vector<std::string> warnings;
};

/// Converged equilibrium at lambda with its test function.
EquilibriumPoint make_equilibrium_point(const ModelSystem& model, double lambda, std::span<const double> guess,
                                        const NewtonOptions& options = {});

/// Second point of a branch: along the unit tangent at `start`, oriented so
/// lambda moves in `direction`, solved on the hyperplane at distance |ds|.
EquilibriumPoint tangent_step(const ModelSystem& model, const EquilibriumPoint& start, double ds,
                              int direction, const NewtonOptions& options = {});

/// Pseudo-arclength continuation: each new x = (u, lambda) solves F = 0 and
///   <x_{n+1} - x_n, (x_n - x_{n-1}) / ds> = ds.
/// The branch holds start, second and up to `steps` further points. A Newton
/// failure ends the branch and is recorded in `failure`.
EquilibriumBranch continue_equilibria(const ModelSystem& model, const EquilibriumPoint& start,
                                      const EquilibriumPoint& second, double ds, int steps,
                                      const NewtonOptions& options = {});

/// Index pairs (i, i+1) where the test function changes sign (0 counts as
/// negative). Points without a complex pair never bracket.
std::vector<std::pair<std::size_t, std::size_t>> scan_branch_for_hopf(const ModelSystem& model,
                                                                      EquilibriumBranch& branch);

/// Bisection on the test function between two bracketing branch points.
/// Each trial point is the equilibrium on the hyperplane through the
/// interpolated point, orthogonal to the chord.
EquilibriumPoint refine_hopf_bracket(const ModelSystem& model, const EquilibriumPoint& a,
                                     const EquilibriumPoint& b, const NewtonOptions& options = {},
                                     int max_bisections = 50);

/// Columns: step, lambda, one per component, testfn.
void write_branch_csv(std::ostream& out, const EquilibriumBranch& branch,
                      const std::vector<std::string>& component_names);

}  // namespace cyclefem
