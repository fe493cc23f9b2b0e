#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cyclefem/dense.hpp"

namespace cyclefem {

/// A one-parameter vector field du/dt = F(lambda, u) with analytic first
/// derivatives. Implementations are immutable after construction; every
/// method is pure and safe to call concurrently.
class ModelSystem {
 public:
  virtual ~ModelSystem() = default;

  virtual std::size_t dim() const = 0;
  virtual Vector rhs(double lambda, std::span<const double> u) const = 0;
  virtual DenseMatrix jac_u(double lambda, std::span<const double> u) const = 0;
  virtual Vector jac_lambda(double lambda, std::span<const double> u) const = 0;
  virtual std::vector<std::string> component_names() const = 0;

  /// Throws DomainError if u is outside the region where F is defined.
  virtual void validate_state(std::span<const double> u) const;

  /// Componentwise scale used for relative comparisons: max(1, |u_i|).
  static Vector state_scale(std::span<const double> u);
};

/// Central finite-difference Jacobian of model.rhs in u, step
/// rel_step * max(1, |u_j|). Test and diagnostic use only.
DenseMatrix finite_difference_jac_u(const ModelSystem& model, double lambda,
                                    std::span<const double> u, double rel_step = 1e-6);
Vector finite_difference_jac_lambda(const ModelSystem& model, double lambda,
                                    std::span<const double> u, double step = 1e-6);

}  // namespace cyclefem
