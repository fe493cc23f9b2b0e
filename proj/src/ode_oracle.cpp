#include "cyclefem/ode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace cyclefem {

namespace {

Vector rk4_step(const ModelSystem& model, double lambda, const Vector& u, double dt) {
  const std::size_t n = u.size();
  Vector tmp(n);
  const Vector k1 = model.rhs(lambda, u);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
  const Vector k2 = model.rhs(lambda, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
  const Vector k3 = model.rhs(lambda, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
  const Vector k4 = model.rhs(lambda, tmp);
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

Trajectory integrate(const ModelSystem& model, double lambda, std::span<const double> u0, double t_end, double dt,
                     std::size_t record_every) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigError("integration needs dt > 0 and t_end > 0");
  if (record_every == 0) record_every = 1;
  model.validate_state(u0);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj;
  Vector u(u0.begin(), u0.end());
  traj.t.push_back(0.0);
  traj.states.push_back(u);
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t0 = static_cast<double>(s - 1) * dt;
    const double h = std::min(dt, t_end - t0);
    const bool record = s % record_every == 0 || s == steps;
    Vector next;
    try {
      next = rk4_step(model, lambda, u, h);
      model.validate_state(next);
      if (record) {
        const Vector half = rk4_step(model, lambda, rk4_step(model, lambda, u, 0.5 * h), 0.5 * h);
        double err = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(half[i] - next[i]));
        traj.max_step_error = std::max(traj.max_step_error, err);
      }
    } catch (const DomainError& e) {
      throw IntegrationError(std::string("integration left the model domain at t = ") + std::to_string(t0) +
                                 ": " + e.what(),
                             t0, u);
    }
    u = std::move(next);
    if (record) {
      traj.t.push_back(t0 + h);
      traj.states.push_back(u);
    }
    traj.steps = s;
  }
  return traj;
}

std::optional<double> measure_period(const Trajectory& traj, std::size_t component, double transient_cut) {
  const std::size_t n = traj.t.size();
  std::size_t first = 0;
  while (first < n && traj.t[first] < transient_cut) ++first;
  if (n - first < 3) return std::nullopt;
  double lo = traj.states[first][component], hi = lo;
  for (std::size_t i = first; i < n; ++i) {
    lo = std::min(lo, traj.states[i][component]);
    hi = std::max(hi, traj.states[i][component]);
  }
  if (!(hi > lo)) return std::nullopt;
  const double level = lo + 0.5 * (hi - lo);

  std::vector<double> peaks;
  for (std::size_t i = first + 1; i + 1 < n; ++i) {
    const double a = traj.states[i - 1][component];
    const double b = traj.states[i][component];
    const double c = traj.states[i + 1][component];
    if (b > level && b > a && b >= c) {
      // Vertex of the parabola through the three samples (uniform spacing).
      const double h = traj.t[i + 1] - traj.t[i];
      const double denom = a - 2.0 * b + c;
      const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
      peaks.push_back(traj.t[i] + shift * h);
    }
  }
  if (peaks.size() < 2) return std::nullopt;
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& names) {
  out << 't';
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", traj.t[i]);
    out << buf;
    for (double v : traj.states[i]) {
      std::snprintf(buf, sizeof buf, "%.10g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace cyclefem
