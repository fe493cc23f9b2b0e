#include "cyclefem/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "cyclefem/errors.hpp"

namespace cyclefem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_mesh(const PeriodicGridFunction& a, const PeriodicGridFunction& b) {
  if (a.mesh().n_elements() != b.mesh().n_elements() || a.components() != b.components())
    throw DomainError("grid functions live on different meshes");
}

// Model evaluation at a quadrature point, naming the element on failure.
template <class Fn>
auto at_element(std::size_t element, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError("element " + std::to_string(element) + ": " + e.what());
  }
}

}  // namespace

double CycleResidual::norm_inf() const {
  return std::max({cyclefem::norm_inf(weak), std::abs(phase), std::abs(arclength)});
}

PeriodicGridFunction phase_seed_phi(const Mesh& mesh, const HopfPoint& hopf) {
  const std::size_t n = hopf.g_r.size();
  return PeriodicGridFunction::sample(mesh, n, [&](double t) {
    const double s = std::sin(kTwoPi * t), c = std::cos(kTwoPi * t);
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = s * hopf.g_r[i] + c * hopf.g_i[i];
    return v;
  });
}

CycleResidual assemble_cycle_residual(const ModelSystem& model, const CycleIterate& x, const ContinuationState& state) {
  const Mesh& mesh = x.u.mesh();
  const std::size_t n = x.u.components();
  require_same_mesh(x.u, state.u_star);
  require_same_mesh(x.u, state.u_dstar);
  require_same_mesh(x.u, state.phase_reference);
  const QuadratureCache cache(mesh);
  const DenseMatrix adv = assemble_bilinear_advection(mesh);
  const std::size_t m = mesh.unknown_nodes();

  CycleResidual r;
  r.weak.assign(m * n, 0.0);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t j = 0; j < m; ++j) {
      const double a = adv(l, j);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) r.weak[l * n + c] += a * x.u.at(j, c);
    }

  Vector u(n), w(n), dw(n), us(n), uss(n), none;
  double arc = 0.0;
  for (std::size_t k = 0; k < mesh.n_elements(); ++k) {
    for (int q = 0; q < Gauss3::kPoints; ++q) {
      const auto& p = cache.point(k, q);
      x.u.evaluate(cache, k, q, u, none);
      const Vector f = at_element(k, [&] { return model.rhs(x.lambda, u); });
      for (int l = 0; l < 3; ++l) {
        const std::size_t row = mesh.unknown_node(k, l) * n;
        for (std::size_t c = 0; c < n; ++c) r.weak[row + c] += p.weight * x.period * f[c] * p.psi[l];
      }
      state.phase_reference.evaluate(cache, k, q, w, dw);
      state.u_star.evaluate(cache, k, q, us, none);
      state.u_dstar.evaluate(cache, k, q, uss, none);
      for (std::size_t c = 0; c < n; ++c) {
        r.phase += p.weight * u[c] * dw[c];
        arc += p.weight * (u[c] - us[c]) * uss[c];
      }
    }
  }
  r.arclength = arc + (x.period - state.period_star) * state.period_dstar +
                (x.lambda - state.lambda_star) * state.lambda_dstar - state.ds;
  return r;
}

BorderedNewtonSystem assemble_newton_system(const ModelSystem& model, const CycleIterate& x,
                                            const ContinuationState& state) {
  const Mesh& mesh = x.u.mesh();
  const std::size_t n = x.u.components();
  const std::size_t m = mesh.unknown_nodes();
  const std::size_t nu = m * n;
  const std::size_t col_t = nu, col_l = nu + 1;
  const std::size_t row_phase = nu, row_arc = nu + 1;
  require_same_mesh(x.u, state.phase_reference);
  require_same_mesh(x.u, state.u_star);
  require_same_mesh(x.u, state.u_dstar);

  BorderedNewtonSystem sys{DenseMatrix(nu + 2, nu + 2), Vector(nu + 2, 0.0)};
  DenseMatrix& a = sys.matrix;
  Vector& b = sys.rhs;

  // int psi_j psi_l' for every component.
  const DenseMatrix adv = assemble_bilinear_advection(mesh);
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t j = 0; j < m; ++j)
      if (adv(l, j) != 0.0)
        for (std::size_t c = 0; c < n; ++c) a(l * n + c, j * n + c) += adv(l, j);

  const QuadratureCache cache(mesh);
  const double t_m = x.period;
  Vector u(n), w(n), dw(n), us(n), uss(n), none;
  double arc_rhs = state.ds;
  for (std::size_t k = 0; k < mesh.n_elements(); ++k) {
    std::size_t node[3];
    for (int i = 0; i < 3; ++i) node[i] = mesh.unknown_node(k, i);
    for (int q = 0; q < Gauss3::kPoints; ++q) {
      const auto& p = cache.point(k, q);
      x.u.evaluate(cache, k, q, u, none);
      const Vector f = at_element(k, [&] { return model.rhs(x.lambda, u); });
      const DenseMatrix jac = at_element(k, [&] { return model.jac_u(x.lambda, u); });
      const Vector fl = model.jac_lambda(x.lambda, u);
      const Vector ju = jac.multiply(u);

      for (int l = 0; l < 3; ++l) {
        const double wl = p.weight * p.psi[l];
        for (std::size_t c = 0; c < n; ++c) {
          const std::size_t row = node[l] * n + c;
          a(row, col_t) += wl * f[c];
          a(row, col_l) += wl * t_m * fl[c];
          b[row] += wl * t_m * (ju[c] + fl[c] * x.lambda);
          for (int j = 0; j < 3; ++j) {
            const double wlj = wl * t_m * p.psi[j];
            for (std::size_t d = 0; d < n; ++d) a(row, node[j] * n + d) += wlj * jac(c, d);
          }
        }
      }

      state.phase_reference.evaluate(cache, k, q, w, dw);
      state.u_dstar.evaluate(cache, k, q, uss, none);
      state.u_star.evaluate(cache, k, q, us, none);
      for (int j = 0; j < 3; ++j) {
        const double wj = p.weight * p.psi[j];
        for (std::size_t d = 0; d < n; ++d) {
          a(row_phase, node[j] * n + d) += wj * dw[d];
          a(row_arc, node[j] * n + d) += wj * uss[d];
        }
      }
      for (std::size_t d = 0; d < n; ++d) arc_rhs += p.weight * us[d] * uss[d];
    }
  }
  a(row_arc, col_t) = state.period_dstar;
  a(row_arc, col_l) = state.lambda_dstar;
  b[row_arc] = arc_rhs + state.period_star * state.period_dstar + state.lambda_star * state.lambda_dstar;
  return sys;
}

CycleIterate newton_iterate(const ModelSystem& model, const ContinuationState& state, const CycleIterate& x) {
  const BorderedNewtonSystem sys = assemble_newton_system(model, x, state);
  Vector sol;
  try {
    sol = lu_solve(sys.matrix, sys.rhs);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(e.pivot(), std::string("bordered cycle system is singular (") + e.what() +
                                             "); try a smaller ds");
  }
  const std::size_t nu = sol.size() - 2;
  CycleIterate next{sol[nu + 1], sol[nu], x.u};
  std::copy(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(nu), next.u.values().begin());
  return next;
}

CycleSolution solve_cycle(const ModelSystem& model, const ContinuationState& state, CycleIterate x,
                          const CycleNewtonOptions& options) {
  std::vector<double> history{assemble_cycle_residual(model, x, state).norm_inf()};
  for (int it = 0; it < options.max_iter; ++it) {
    x = newton_iterate(model, state, x);
    if (!(x.period > 0.0) || !std::isfinite(x.period) || !std::isfinite(x.lambda))
      throw ConvergenceError("cycle Newton produced period " + std::to_string(x.period), history);
    const double r = assemble_cycle_residual(model, x, state).norm_inf();
    history.push_back(r);
    if (!std::isfinite(r)) break;
    if (r <= options.tol * std::max(1.0, std::abs(x.period))) {
      if (r > options.polish_above) {
        CycleIterate polished = newton_iterate(model, state, x);
        const double rp = assemble_cycle_residual(model, polished, state).norm_inf();
        if (rp < r) {
          history.push_back(rp);
          return CycleSolution{polished.lambda, polished.period, std::move(polished.u), rp, 0, state.ds,
                               std::move(history)};
        }
      }
      return CycleSolution{x.lambda, x.period, std::move(x.u), r, 0, state.ds, std::move(history)};
    }
  }
  throw ConvergenceError("cycle Newton did not converge in " + std::to_string(options.max_iter) + " iterations",
                         history);
}

ContinuationState first_step_state(const Mesh& mesh, const HopfPoint& hopf, double ds) {
  const PeriodicGridFunction phi = phase_seed_phi(mesh, hopf);
  return ContinuationState{PeriodicGridFunction::constant(mesh, hopf.u),
                           hopf.period(),
                           hopf.lambda,
                           phi,
                           0.0,
                           0.0,
                           phi,
                           ds};
}

CycleSolution hopf_cycle(const Mesh& mesh, const HopfPoint& hopf) {
  return CycleSolution{hopf.lambda, hopf.period(), PeriodicGridFunction::constant(mesh, hopf.u), 0.0, 0, 0.0, {}};
}

ContinuationState next_step_state(const CycleSolution& prev, const CycleSolution& cur, double ds) {
  require_same_mesh(prev.states, cur.states);
  const double h = cur.ds_used;
  PeriodicGridFunction diff(cur.states);
  for (std::size_t i = 0; i < diff.values().size(); ++i)
    diff.values()[i] = (cur.states.values()[i] - prev.states.values()[i]) / h;
  return ContinuationState{cur.states,
                           cur.period,
                           cur.lambda,
                           std::move(diff),
                           (cur.period - prev.period) / h,
                           (cur.lambda - prev.lambda) / h,
                           cur.states,
                           ds};
}

namespace {

template <class MakeState, class MakeGuess>
CycleSolution with_halving(const ModelSystem& model, double ds, const CycleNewtonOptions& options,
                           MakeState&& make_state, MakeGuess&& make_guess) {
  std::vector<double> last_history;
  std::string last_error;
  for (int attempt = 0; attempt <= options.max_halvings; ++attempt, ds *= 0.5) {
    const ContinuationState state = make_state(ds);
    try {
      return solve_cycle(model, state, make_guess(ds), options);
    } catch (const ConvergenceError& e) {
      last_history = e.history();
      last_error = e.what();
    } catch (const SingularMatrixError& e) {
      last_error = e.what();
    } catch (const DomainError& e) {
      last_error = e.what();
    }
  }
  throw ConvergenceError("cycle step failed after " + std::to_string(options.max_halvings) +
                             " halvings of ds: " + last_error,
                         last_history);
}

}  // namespace

CycleSolution first_cycle_step(const ModelSystem& model, const Mesh& mesh, const HopfPoint& hopf, double ds,
                               const CycleNewtonOptions& options) {
  const PeriodicGridFunction phi = phase_seed_phi(mesh, hopf);
  const PeriodicGridFunction u0 = PeriodicGridFunction::constant(mesh, hopf.u);
  CycleSolution s = with_halving(
      model, ds, options, [&](double h) { return first_step_state(mesh, hopf, h); },
      [&](double h) {
        CycleIterate x{hopf.lambda, hopf.period(), u0};
        for (std::size_t i = 0; i < x.u.values().size(); ++i) x.u.values()[i] += h * phi.values()[i];
        return x;
      });
  s.step = 1;
  return s;
}

CycleSolution continuation_step(const ModelSystem& model, const CycleSolution& prev, const CycleSolution& cur,
                                double ds, const CycleNewtonOptions& options) {
  CycleSolution s = with_halving(
      model, ds, options, [&](double h) { return next_step_state(prev, cur, h); },
      [&](double) { return CycleIterate{cur.lambda, cur.period, cur.states}; });
  s.step = cur.step + 1;
  return s;
}

CycleBranch run_cycle_continuation(const ModelSystem& model, const Mesh& mesh, const HopfPoint& hopf,
                                   const CycleContinuationSettings& settings,
                                   const std::function<void(const CycleSolution&)>& on_cycle) {
  if (!(settings.ds > 0.0) || !std::isfinite(settings.ds)) throw ConfigError("cycle ds must be positive");
  CycleBranch branch;
  if (settings.steps <= 0) return branch;
  CycleSolution previous = hopf_cycle(mesh, hopf);
  try {
    branch.cycles.push_back(first_cycle_step(model, mesh, hopf, settings.ds, settings.newton));
    if (on_cycle) on_cycle(branch.cycles.back());
    for (int s = 1; s < settings.steps; ++s) {
      CycleSolution next = continuation_step(model, previous, branch.cycles.back(), settings.ds, settings.newton);
      previous = branch.cycles.back();
      branch.cycles.push_back(std::move(next));
      if (on_cycle) on_cycle(branch.cycles.back());
    }
  } catch (const Error& e) {
    branch.failure = "step " + std::to_string(branch.cycles.size()) + ": " + e.what();
  }
  return branch;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_cycle_branch_csv(std::ostream& out, const CycleBranch& branch, const std::vector<std::string>& names) {
  out << "# cycle rows: cycle,step,lambda,T,residual\n";
  out << "# node rows: node,step,node,t";
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (const auto& c : branch.cycles) {
    out << "cycle," << c.step << ',' << fmt(c.lambda) << ',' << fmt(c.period) << ',' << fmt(c.residual_norm) << '\n';
    const Mesh& mesh = c.states.mesh();
    for (std::size_t g = 0; g < mesh.geometric_nodes(); ++g) {
      const std::size_t j = g % mesh.unknown_nodes();
      out << "node," << c.step << ',' << g << ',' << fmt(mesh.node_abscissa(g));
      for (std::size_t k = 0; k < c.states.components(); ++k) out << ',' << fmt(c.states.at(j, k));
      out << '\n';
    }
  }
}

void write_cycle_summary_csv(std::ostream& out, const CycleBranch& branch, const std::vector<std::string>& names) {
  const std::size_t shown = std::min<std::size_t>(2, names.size());
  out << "step,lambda,T";
  for (std::size_t k = 0; k < shown; ++k) out << ",min_" << names[k] << ",max_" << names[k];
  out << '\n';
  for (const auto& c : branch.cycles) {
    out << c.step << ',' << fmt(c.lambda) << ',' << fmt(c.period);
    for (std::size_t k = 0; k < shown; ++k) {
      double lo = c.states.at(0, k), hi = lo;
      for (std::size_t j = 1; j < c.states.mesh().unknown_nodes(); ++j) {
        lo = std::min(lo, c.states.at(j, k));
        hi = std::max(hi, c.states.at(j, k));
      }
      out << ',' << fmt(lo) << ',' << fmt(hi);
    }
    out << '\n';
  }
}

}  // namespace cyclefem
