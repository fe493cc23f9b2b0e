#pragma once

// Limit cycles u(t) of u' = F(lambda, u) rescaled to t in [0, 1]:
//   int u . v' dt + T int F(lambda, u) . v dt = 0     for every test v,
//   int <u, w'> dt = 0                                (phase, w = reference),
//   <u - u*, u**> + (T - T*) T** + (lambda - lambda*) lambda** = ds
// discretized with periodic P2 elements. Unknowns are ordered node-major
// (node j, component c at j * n + c), then T, then lambda.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclefem/hopf.hpp"
#include "cyclefem/model.hpp"
#include "cyclefem/periodic_fem.hpp"

namespace cyclefem {

struct CycleSolution {
  double lambda = 0.0;
  double period = 0.0;
  PeriodicGridFunction states;
  double residual_norm = 0.0;
  int step = 0;
  double ds_used = 0.0;
  std::vector<double> newton_history;  // full residual before and after each iteration
};

/// Data fixed during one continuation step.
struct ContinuationState {
  PeriodicGridFunction u_star;
  double period_star = 0.0;
  double lambda_star = 0.0;
  PeriodicGridFunction u_dstar;
  double period_dstar = 0.0;
  double lambda_dstar = 0.0;
  PeriodicGridFunction phase_reference;
  double ds = 0.0;
};

struct CycleIterate {
  double lambda;
  double period;
  PeriodicGridFunction u;
};

struct CycleResidual {
  Vector weak;  // node-major, like the unknowns
  double phase = 0.0;
  double arclength = 0.0;
  double norm_inf() const;
};

struct BorderedNewtonSystem {
  DenseMatrix matrix;
  Vector rhs;
};

/// phi(t) = sin(2 pi t) g_r + cos(2 pi t) g_i sampled at the nodes.
PeriodicGridFunction phase_seed_phi(const Mesh& mesh, const HopfPoint& hopf);

/// Weak residual at (lambda, T, u) plus the phase and arclength rows for `state`.
CycleResidual assemble_cycle_residual(const ModelSystem& model, const CycleIterate& x, const ContinuationState& state);

/// Newton system in the affine form: its solution is the next iterate.
BorderedNewtonSystem assemble_newton_system(const ModelSystem& model, const CycleIterate& x,
                                            const ContinuationState& state);
CycleIterate newton_iterate(const ModelSystem& model, const ContinuationState& state, const CycleIterate& x);

struct CycleNewtonOptions {
  double tol = 1e-9;  // scaled by max(1, |T|)
  int max_iter = 20;
  int max_halvings = 4;
  // Once converged, one extra iteration is taken while the residual is above
  // this absolute level. Long periods make the scaled tolerance loose.
  double polish_above = 1e-10;
};

/// Newton from `x` to tolerance. Throws ConvergenceError with the history.
CycleSolution solve_cycle(const ModelSystem& model, const ContinuationState& state, CycleIterate x,
                          const CycleNewtonOptions& options);

/// Starred data for the step off the Hopf point: u* = u0, u** = phi,
/// T** = lambda** = 0, phase reference phi.
ContinuationState first_step_state(const Mesh& mesh, const HopfPoint& hopf, double ds);

/// The Hopf point as the degenerate cycle of step 0: constant u0, T = 2 pi / beta.
CycleSolution hopf_cycle(const Mesh& mesh, const HopfPoint& hopf);

/// Starred data after `cur`: divided differences of (prev, cur) by cur.ds_used,
/// phase reference cur.
ContinuationState next_step_state(const CycleSolution& prev, const CycleSolution& cur, double ds);

/// Initial iterate u0 + ds phi, T = 2 pi / beta, lambda = lambda0; halves ds
/// on failure.
CycleSolution first_cycle_step(const ModelSystem& model, const Mesh& mesh, const HopfPoint& hopf, double ds,
                               const CycleNewtonOptions& options = {});

/// Initial iterate is `cur` itself; halves ds on failure.
CycleSolution continuation_step(const ModelSystem& model, const CycleSolution& prev, const CycleSolution& cur,
                                double ds, const CycleNewtonOptions& options = {});

struct CycleContinuationSettings {
  double ds = 1.0;
  int steps = 500;
  CycleNewtonOptions newton;
};

struct CycleBranch {
  std::vector<CycleSolution> cycles;
  std::optional<std::string> failure;
};

/// first_cycle_step, then steps - 1 continuation steps. `on_cycle` (if set)
/// sees every accepted cycle.
CycleBranch run_cycle_continuation(const ModelSystem& model, const Mesh& mesh, const HopfPoint& hopf,
                                   const CycleContinuationSettings& settings,
                                   const std::function<void(const CycleSolution&)>& on_cycle = {});

/// One header row per cycle (cycle,step,lambda,T,residual) followed by its
/// node rows (node,step,node,t,components...).
void write_cycle_branch_csv(std::ostream& out, const CycleBranch& branch, const std::vector<std::string>& names);

/// step, lambda, T, then min and max of the first two components.
void write_cycle_summary_csv(std::ostream& out, const CycleBranch& branch, const std::vector<std::string>& names);

}  // namespace cyclefem
