#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclefem/errors.hpp"
#include "cyclefem/model.hpp"

namespace cyclefem {

struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> states;
  std::size_t steps = 0;
  /// Largest |one step - two half steps| (inf-norm) seen at the recorded samples.
  double max_step_error = 0.0;
};

/// The state left the model's domain during integration.
class IntegrationError : public DomainError {
 public:
  IntegrationError(const std::string& what, double t, Vector last_good)
      : DomainError(what), t_(t), last_good_(std::move(last_good)) {}
  double time() const noexcept { return t_; }
  const Vector& last_good_state() const noexcept { return last_good_; }

 private:
  double t_;
  Vector last_good_;
};

/// Classic fixed-step RK4 from u0 over [0, t_end]. Every `record_every`-th
/// step is stored (and the final state always), so long runs stay small.
Trajectory integrate(const ModelSystem& model, double lambda, std::span<const double> u0, double t_end, double dt,
                     std::size_t record_every = 1);

/// Mean spacing of the maxima of one component after `transient_cut`.
/// Maxima are the sampled local maxima above the mid level of the signal,
/// refined by a parabola through three samples. nullopt with fewer than two.
std::optional<double> measure_period(const Trajectory& traj, std::size_t component, double transient_cut);

/// Columns: t, then one per component.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& names);

}  // namespace cyclefem
