#pragma once

// From-scratch evaluation of the discrete periodic boundary-value problem,
// sharing nothing with the library's assembly. Values are node-major:
// nodal[j * m + c] for node j in [0, 2n) and component c in [0, m).

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Rhs = std::function<std::vector<double>(const std::vector<double>&)>;

struct CycleEquations {
  std::vector<double> weak;
  double phase = 0.0;
  double arclength = 0.0;

  double max_abs() const {
    double r = std::max(std::abs(phase), std::abs(arclength));
    for (double w : weak) r = std::max(r, std::abs(w));
    return r;
  }
};

namespace detail {

// Quadratic Lagrange basis on [0, 1] with nodes 0, 1/2, 1.
inline double lagrange(int i, double s) {
  switch (i) {
    case 0: return (2.0 * s - 1.0) * (s - 1.0);
    case 1: return 4.0 * s * (1.0 - s);
    default: return s * (2.0 * s - 1.0);
  }
}

inline double lagrange_ds(int i, double s) {
  switch (i) {
    case 0: return 4.0 * s - 3.0;
    case 1: return 4.0 - 8.0 * s;
    default: return 4.0 * s - 1.0;
  }
}

}  // namespace detail

// Weak residual  int u_c psi_l' + T F_c(u) psi_l  with the three-point Gauss
// rule per element. Phase and arclength rows are filled when the reference
// data is non-empty.
inline CycleEquations cycle_equations(const Rhs& f, int n, int m, double period, const std::vector<double>& nodal,
                                      const std::vector<double>& phase_ref = {},
                                      const std::vector<double>& u_star = {},
                                      const std::vector<double>& u_dstar = {}, double t_terms = 0.0,
                                      double ds = 0.0) {
  const double a = std::sqrt(0.6);
  const double gs[3] = {0.5 * (1.0 - a), 0.5, 0.5 * (1.0 + a)};
  const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const int nodes = 2 * n;
  const double h = 1.0 / n;

  CycleEquations out;
  out.weak.assign(static_cast<std::size_t>(nodes * m), 0.0);
  double inner = 0.0;
  for (int k = 0; k < n; ++k) {
    const int idx[3] = {2 * k, 2 * k + 1, (2 * k + 2) % nodes};
    for (int q = 0; q < 3; ++q) {
      std::vector<double> u(m, 0.0), du(m, 0.0), w(m, 0.0), dw(m, 0.0), us(m, 0.0), uss(m, 0.0);
      for (int i = 0; i < 3; ++i) {
        const double p = detail::lagrange(i, gs[q]);
        const double dp = detail::lagrange_ds(i, gs[q]) / h;
        for (int c = 0; c < m; ++c) {
          const std::size_t at = static_cast<std::size_t>(idx[i] * m + c);
          u[c] += p * nodal[at];
          du[c] += dp * nodal[at];
          if (!phase_ref.empty()) dw[c] += dp * phase_ref[at];
          if (!u_star.empty()) {
            us[c] += p * u_star[at];
            uss[c] += p * u_dstar[at];
          }
        }
      }
      const std::vector<double> fu = f(u);
      const double wq = gw[q] * h;
      for (int i = 0; i < 3; ++i) {
        const double p = detail::lagrange(i, gs[q]);
        const double dp = detail::lagrange_ds(i, gs[q]) / h;
        for (int c = 0; c < m; ++c)
          out.weak[static_cast<std::size_t>(idx[i] * m + c)] += wq * (u[c] * dp + period * fu[c] * p);
      }
      for (int c = 0; c < m; ++c) {
        out.phase += wq * u[c] * dw[c];
        inner += wq * (u[c] - us[c]) * uss[c];
      }
    }
  }
  out.arclength = inner + t_terms - ds;
  return out;
}

}  // namespace oracle
