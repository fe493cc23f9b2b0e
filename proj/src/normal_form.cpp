#include "cyclefem/normal_form.hpp"

#include <cmath>

#include "cyclefem/errors.hpp"

namespace cyclefem {

HopfNormalForm::HopfNormalForm(double omega) : omega_(omega) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw DomainError("Hopf normal form needs omega > 0");
}

Vector HopfNormalForm::rhs(double lambda, std::span<const double> u) const {
  validate_state(u);
  const double x = u[0];
  const double y = u[1];
  const double r2 = x * x + y * y;
  return {lambda * x - omega_ * y - x * r2, omega_ * x + lambda * y - y * r2};
}

DenseMatrix HopfNormalForm::jac_u(double lambda, std::span<const double> u) const {
  validate_state(u);
  const double x = u[0];
  const double y = u[1];
  DenseMatrix j(2, 2);
  j(0, 0) = lambda - 3.0 * x * x - y * y;
  j(0, 1) = -omega_ - 2.0 * x * y;
  j(1, 0) = omega_ - 2.0 * x * y;
  j(1, 1) = lambda - x * x - 3.0 * y * y;
  return j;
}

Vector HopfNormalForm::jac_lambda(double, std::span<const double> u) const {
  validate_state(u);
  return {u[0], u[1]};
}

}  // namespace cyclefem
