#include "cyclefem/model.hpp"

#include <algorithm>
#include <cmath>

#include "cyclefem/errors.hpp"

namespace cyclefem {

void ModelSystem::validate_state(std::span<const double> u) const {
  if (u.size() != dim())
    throw DomainError("state has " + std::to_string(u.size()) + " components, model expects " +
                      std::to_string(dim()));
  const auto names = component_names();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!std::isfinite(u[i])) throw DomainError("non-finite state component " + names[i]);
}

Vector ModelSystem::state_scale(std::span<const double> u) {
  Vector s(u.size());
  std::transform(u.begin(), u.end(), s.begin(),
                 [](double v) { return std::max(1.0, std::abs(v)); });
  return s;
}

DenseMatrix finite_difference_jac_u(const ModelSystem& model, double lambda,
                                    std::span<const double> u, double rel_step) {
  const std::size_t n = model.dim();
  DenseMatrix jac(n, n);
  Vector probe(u.begin(), u.end());
  for (std::size_t j = 0; j < n; ++j) {
    const double h = rel_step * std::max(1.0, std::abs(u[j]));
    probe[j] = u[j] + h;
    const Vector fp = model.rhs(lambda, probe);
    probe[j] = u[j] - h;
    const Vector fm = model.rhs(lambda, probe);
    probe[j] = u[j];
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

Vector finite_difference_jac_lambda(const ModelSystem& model, double lambda,
                                    std::span<const double> u, double step) {
  const Vector fp = model.rhs(lambda + step, u);
  const Vector fm = model.rhs(lambda - step, u);
  Vector out(fp.size());
  for (std::size_t i = 0; i < fp.size(); ++i) out[i] = (fp[i] - fm[i]) / (2.0 * step);
  return out;
}

}  // namespace cyclefem
