#include "cyclefem/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "cyclefem/errors.hpp"

namespace cyclefem {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// x = (u, lambda) packed with lambda last.
Vector pack(const EquilibriumPoint& p) {
  Vector x(p.u);
  x.push_back(p.lambda);
  return x;
}

// Newton on F(lambda, u) = 0 plus one linear row <x, a> = b in x = (u, lambda).
struct Bordered {
  Vector x;
  double residual;
};

Bordered newton_bordered(const ModelSystem& model, Vector x, std::span<const double> a, double b,
                         const NewtonOptions& options) {
  const std::size_t n = model.dim();
  std::vector<double> history;
  int growth = 0;
  for (int it = 0;; ++it) {
    const std::span<const double> u(x.data(), n);
    const Vector f = model.rhs(x[n], u);
    const double row = dot(a, x) - b;
    const double res = std::max(norm_inf(f), std::abs(row));
    history.push_back(res);
    if (res <= options.tol) return {x, res};
    if (history.size() > 1 && res > history[history.size() - 2]) {
      if (++growth >= 3) throw ConvergenceError("continuation Newton diverged", history);
    } else {
      growth = 0;
    }
    if (it >= options.max_iter)
      throw ConvergenceError("continuation Newton did not converge in " + std::to_string(options.max_iter) +
                                 " iterations",
                             history);
    const DenseMatrix ju = model.jac_u(x[n], u);
    const Vector jl = model.jac_lambda(x[n], u);
    DenseMatrix m(n + 1, n + 1);
    Vector rhs(n + 1);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) m(r, c) = ju(r, c);
      m(r, n) = jl[r];
      rhs[r] = -f[r];
    }
    for (std::size_t c = 0; c <= n; ++c) m(n, c) = a[c];
    rhs[n] = -row;
    const Vector dx = lu_solve(m, rhs);
    for (std::size_t i = 0; i <= n; ++i) x[i] += dx[i];
  }
}

bool positive(double v) { return v > 0.0; }

}  // namespace

NewtonReport newton_equilibrium(const ModelSystem& model, double lambda, std::span<const double> guess,
                                const NewtonOptions& options) {
  NewtonReport rep;
  rep.u.assign(guess.begin(), guess.end());
  int growth = 0;
  for (int it = 0;; ++it) {
    const Vector f = model.rhs(lambda, rep.u);
    rep.residual = norm_inf(f);
    rep.history.push_back(rep.residual);
    rep.iterations = it;
    if (rep.residual <= options.tol) return rep;
    if (it > 0 && rep.residual > rep.history[rep.history.size() - 2]) {
      if (++growth >= 3) throw ConvergenceError("equilibrium Newton diverged", rep.history);
    } else {
      growth = 0;
    }
    if (it >= options.max_iter)
      throw ConvergenceError("equilibrium Newton did not converge in " + std::to_string(options.max_iter) +
                                 " iterations",
                             rep.history);
    const Vector du = lu_solve(model.jac_u(lambda, rep.u), f);
    for (std::size_t i = 0; i < du.size(); ++i) rep.u[i] -= du[i];
  }
}

Vector find_initial_equilibrium(const ModelSystem& model, double lambda, const SearchBox& box) {
  const std::size_t n = model.dim();
  if (box.lower.size() != n || box.upper.size() != n)
    throw ConfigError("search box dimension does not match the model");
  for (std::size_t i = 0; i < n; ++i)
    if (!(box.lower[i] <= box.upper[i])) throw ConfigError("search box has lower > upper");

  const auto project = [&](Vector& u) {
    for (std::size_t i = 0; i < n; ++i) u[i] = std::clamp(u[i], box.lower[i], box.upper[i]);
  };
  const auto residual = [&](const Vector& u) {
    try {
      return norm_inf(model.rhs(lambda, u));
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  constexpr double kThreshold = 1e-8;
  constexpr double kFractions[] = {0.5, 0.25, 0.75};
  bool degenerate = true;
  for (std::size_t i = 0; i < n; ++i) degenerate = degenerate && box.lower[i] == box.upper[i];
  std::size_t starts = 1;
  if (!degenerate)
    for (std::size_t i = 0; i < n; ++i) starts *= 3;

  Vector best;
  double best_res = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    Vector u(n);
    std::size_t code = s;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = box.lower[i] + kFractions[code % 3] * (box.upper[i] - box.lower[i]);
      code /= 3;
    }
    double res = residual(u);
    for (int it = 0; it < 60 && std::isfinite(res) && res > kThreshold; ++it) {
      Vector step;
      try {
        // Square system: the Gauss-Newton direction is the Newton direction.
        step = lu_solve(model.jac_u(lambda, u), model.rhs(lambda, u));
      } catch (const Error&) {
        break;
      }
      double damping = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 30; ++ls, damping *= 0.5) {
        Vector trial(u);
        for (std::size_t i = 0; i < n; ++i) trial[i] -= damping * step[i];
        project(trial);
        const double r = residual(trial);
        if (r < res) {
          u = std::move(trial);
          res = r;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (res <= kThreshold) return u;
    if (res < best_res) {
      best_res = res;
      best = u;
    }
  }
  std::string msg = "no equilibrium found in the search box; best residual " + std::to_string(best_res);
  if (!best.empty()) {
    msg += " at (";
    for (std::size_t i = 0; i < n; ++i) msg += (i ? ", " : "") + std::to_string(best[i]);
    msg += ")";
  }
  throw ConvergenceError(msg, {best_res});
}

std::optional<double> hopf_test_function(const ModelSystem& model, double lambda, std::span<const double> u) {
  const ComplexEigenvalueList ev = eigenvalues_qr(model.jac_u(lambda, u));
  std::optional<double> best;
  for (const Complex& z : ev)
    if (z.imag() != 0.0 && (!best || z.real() > *best)) best = z.real();
  return best;
}

EquilibriumPoint make_equilibrium_point(const ModelSystem& model, double lambda, std::span<const double> guess,
                                        const NewtonOptions& options) {
  EquilibriumPoint p;
  p.lambda = lambda;
  p.u = newton_equilibrium(model, lambda, guess, options).u;
  p.test_function = hopf_test_function(model, lambda, p.u);
  return p;
}

EquilibriumPoint tangent_step(const ModelSystem& model, const EquilibriumPoint& start, double ds,
                              int direction, const NewtonOptions& options) {
  const std::size_t n = model.dim();
  // Tangent: [F_u F_lambda] t = 0 with t_lambda = 1, then normalised.
  const Vector jl = model.jac_lambda(start.lambda, start.u);
  Vector t = lu_solve(model.jac_u(start.lambda, start.u), jl);
  for (double& v : t) v = -v;
  t.push_back(1.0);
  const double norm = std::sqrt(dot(t, t));
  const double sign = direction >= 0 ? 1.0 : -1.0;
  for (double& v : t) v *= sign / norm;

  const Vector x0 = pack(start);
  Vector x(x0);
  const double step = std::abs(ds);
  for (std::size_t i = 0; i <= n; ++i) x[i] += step * t[i];
  const Bordered sol = newton_bordered(model, x, t, dot(t, x0) + step, options);
  EquilibriumPoint p;
  p.u.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
  p.lambda = sol.x[n];
  p.test_function = hopf_test_function(model, p.lambda, p.u);
  return p;
}

EquilibriumBranch continue_equilibria(const ModelSystem& model, const EquilibriumPoint& start,
                                      const EquilibriumPoint& second, double ds, int steps,
                                      const NewtonOptions& options) {
  if (ds == 0.0 || !std::isfinite(ds)) throw ConfigError("continuation step ds must be nonzero and finite");
  const std::size_t n = model.dim();
  EquilibriumBranch branch;
  branch.ds = ds;
  branch.direction = second.lambda >= start.lambda ? 1 : -1;
  branch.points = {start, second};
  for (int s = 0; s < steps; ++s) {
    const Vector xn = pack(branch.points.back());
    const Vector xp = pack(branch.points[branch.points.size() - 2]);
    Vector secant(n + 1);
    for (std::size_t i = 0; i <= n; ++i) secant[i] = (xn[i] - xp[i]) / ds;
    const double rhs = dot(secant, xn) + ds;
    const double ss = dot(secant, secant);
    // The predictor lies on the hyperplane: <x - xn, secant> = ds.
    Vector x(xn);
    for (std::size_t i = 0; i <= n; ++i) x[i] += ds / ss * secant[i];
    try {
      const Bordered sol = newton_bordered(model, x, secant, rhs, options);
      EquilibriumPoint p;
      p.u.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
      p.lambda = sol.x[n];
      try {
        p.test_function = hopf_test_function(model, p.lambda, p.u);
      } catch (const ConvergenceError& e) {
        branch.warnings.push_back("step " + std::to_string(branch.points.size()) + ": " + e.what());
      }
      branch.points.push_back(std::move(p));
    } catch (const Error& e) {
      branch.failure = "step " + std::to_string(branch.points.size()) + ": " + e.what();
      break;
    }
  }
  return branch;
}

std::vector<std::pair<std::size_t, std::size_t>> scan_branch_for_hopf(const ModelSystem& model,
                                                                      EquilibriumBranch& branch) {
  for (std::size_t i = 0; i < branch.points.size(); ++i) {
    auto& p = branch.points[i];
    try {
      p.test_function = hopf_test_function(model, p.lambda, p.u);
    } catch (const ConvergenceError& e) {
      p.test_function.reset();
      branch.warnings.push_back("point " + std::to_string(i) + " skipped: " + e.what());
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  for (std::size_t i = 0; i + 1 < branch.points.size(); ++i) {
    const auto& a = branch.points[i].test_function;
    const auto& b = branch.points[i + 1].test_function;
    if (a && b && positive(*a) != positive(*b)) brackets.emplace_back(i, i + 1);
  }
  return brackets;
}

EquilibriumPoint refine_hopf_bracket(const ModelSystem& model, const EquilibriumPoint& a,
                                     const EquilibriumPoint& b, const NewtonOptions& options,
                                     int max_bisections) {
  if (!a.test_function || !b.test_function || positive(*a.test_function) == positive(*b.test_function))
    throw DomainError("points do not bracket a sign change of the Hopf test function");
  const std::size_t n = model.dim();
  const Vector xa = pack(a), xb = pack(b);
  Vector chord(n + 1);
  for (std::size_t i = 0; i <= n; ++i) chord[i] = xb[i] - xa[i];
  const double chord_len = std::sqrt(dot(chord, chord));

  double lo = 0.0, hi = 1.0;
  const bool lo_positive = positive(*a.test_function);
  EquilibriumPoint best = std::abs(*a.test_function) < std::abs(*b.test_function) ? a : b;
  for (int it = 0; it < max_bisections && (hi - lo) * chord_len > 1e-12; ++it) {
    const double theta = 0.5 * (lo + hi);
    Vector x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = xa[i] + theta * chord[i];
    const Bordered sol = newton_bordered(model, x, chord, dot(chord, x), options);
    EquilibriumPoint p;
    p.u.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
    p.lambda = sol.x[n];
    p.test_function = hopf_test_function(model, p.lambda, p.u);
    if (!p.test_function) throw DomainError("complex pair lost while refining the Hopf bracket");
    if (positive(*p.test_function) == lo_positive)
      lo = theta;
    else
      hi = theta;
    best = std::move(p);
  }
  return best;
}

void write_branch_csv(std::ostream& out, const EquilibriumBranch& branch,
                      const std::vector<std::string>& component_names) {
  out << "step,lambda";
  for (const auto& name : component_names) out << ',' << name;
  out << ",testfn\n";
  char buf[32];
  for (std::size_t i = 0; i < branch.points.size(); ++i) {
    const auto& p = branch.points[i];
    std::snprintf(buf, sizeof buf, "%.10g", p.lambda);
    out << i << ',' << buf;
    for (double v : p.u) {
      std::snprintf(buf, sizeof buf, "%.10g", v);
      out << ',' << buf;
    }
    if (p.test_function)
      std::snprintf(buf, sizeof buf, "%.10g", *p.test_function);
    else
      std::snprintf(buf, sizeof buf, "nan");
    out << ',' << buf << '\n';
  }
}

}  // namespace cyclefem
