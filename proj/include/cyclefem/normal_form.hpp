#pragma once

#include "cyclefem/model.hpp"

namespace cyclefem {

/// Hopf normal form
///   x' = lambda x - omega y - x (x^2 + y^2)
///   y' = omega x + lambda y - y (x^2 + y^2)
/// For lambda > 0 the limit cycle is the circle of radius sqrt(lambda) with
/// period 2 pi / omega.
class HopfNormalForm final : public ModelSystem {
 public:
  explicit HopfNormalForm(double omega = 1.0);

  double omega() const noexcept { return omega_; }

  std::size_t dim() const override { return 2; }
  Vector rhs(double lambda, std::span<const double> u) const override;
  DenseMatrix jac_u(double lambda, std::span<const double> u) const override;
  Vector jac_lambda(double lambda, std::span<const double> u) const override;
  std::vector<std::string> component_names() const override { return {"x", "y"}; }

 private:
  double omega_;
};

}  // namespace cyclefem
