#include "cyclefem/periodic_fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cyclefem/errors.hpp"

namespace cyclefem {

Mesh::Mesh(int n_elements) {
  if (n_elements < 2)
    throw ConfigError("mesh needs at least 2 elements, got " + std::to_string(n_elements));
  n_elements_ = static_cast<std::size_t>(n_elements);
}

double Mesh::node_abscissa(std::size_t geometric_node) const {
  return static_cast<double>(geometric_node) / static_cast<double>(2 * n_elements_);
}

double Mesh::element_left(std::size_t element) const {
  return static_cast<double>(element) / static_cast<double>(n_elements_);
}

std::size_t Mesh::global_node(std::size_t element, int local) const {
  return 2 * element + static_cast<std::size_t>(local);
}

std::size_t Mesh::unknown_node(std::size_t element, int local) const {
  return global_node(element, local) % unknown_nodes();
}

std::size_t Mesh::locate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("abscissa " + std::to_string(t) + " outside [0, 1]");
  const auto k = static_cast<std::size_t>(t * static_cast<double>(n_elements_));
  return std::min(k, n_elements_ - 1);
}

Mesh build_mesh(int n_elements) { return Mesh(n_elements); }

BasisValue basis_eval(int local, double s) {
  switch (local) {
    case 0:
      return {2.0 * (s - 0.5) * (s - 1.0), 4.0 * s - 3.0};
    case 1:
      return {4.0 * s * (1.0 - s), 4.0 - 8.0 * s};
    case 2:
      return {2.0 * s * (s - 0.5), 4.0 * s - 1.0};
    default:
      throw DomainError("local basis index must be 0, 1 or 2");
  }
}

QuadratureCache::QuadratureCache(const Mesh& mesh) {
  const double h = mesh.element_length();
  points_.reserve(mesh.n_elements() * Gauss3::kPoints);
  for (std::size_t k = 0; k < mesh.n_elements(); ++k) {
    for (int q = 0; q < Gauss3::kPoints; ++q) {
      const double s = Gauss3::abscissae[q];
      Point p{mesh.element_left(k) + h * s, h * Gauss3::weights[q], {}, {}};
      for (int i = 0; i < 3; ++i) {
        const BasisValue b = basis_eval(i, s);
        p.psi[i] = b.value;
        p.dpsi_dt[i] = b.derivative / h;
      }
      points_.push_back(p);
    }
  }
}

PeriodicGridFunction::PeriodicGridFunction(const Mesh& mesh, std::size_t components)
    : mesh_(mesh), components_(components), values_(mesh.unknown_nodes() * components, 0.0) {}

PeriodicGridFunction::PeriodicGridFunction(const Mesh& mesh, std::size_t components, Vector values)
    : mesh_(mesh), components_(components), values_(std::move(values)) {
  if (values_.size() != mesh.unknown_nodes() * components)
    throw DomainError("grid function has " + std::to_string(values_.size()) + " values, expected " +
                      std::to_string(mesh.unknown_nodes() * components));
}

PeriodicGridFunction PeriodicGridFunction::sample(const Mesh& mesh, std::size_t components,
                                                  const std::function<Vector(double)>& f) {
  PeriodicGridFunction g(mesh, components);
  for (std::size_t j = 0; j < mesh.unknown_nodes(); ++j) {
    const Vector v = f(mesh.node_abscissa(j));
    for (std::size_t c = 0; c < components; ++c) g.at(j, c) = v[c];
  }
  return g;
}

PeriodicGridFunction PeriodicGridFunction::constant(const Mesh& mesh, std::span<const double> value) {
  PeriodicGridFunction g(mesh, value.size());
  for (std::size_t j = 0; j < mesh.unknown_nodes(); ++j)
    for (std::size_t c = 0; c < value.size(); ++c) g.at(j, c) = value[c];
  return g;
}

Vector PeriodicGridFunction::interpolate(double t) const {
  const std::size_t k = mesh_.locate(t);
  const double s = t * static_cast<double>(mesh_.n_elements()) - static_cast<double>(k);
  Vector out(components_, 0.0);
  for (int i = 0; i < 3; ++i) {
    const double psi = basis_eval(i, s).value;
    const std::size_t node = mesh_.unknown_node(k, i);
    for (std::size_t c = 0; c < components_; ++c) out[c] += psi * at(node, c);
  }
  return out;
}

Vector PeriodicGridFunction::derivative(double t) const {
  const std::size_t k = mesh_.locate(t);
  const double h = mesh_.element_length();
  const double s = t * static_cast<double>(mesh_.n_elements()) - static_cast<double>(k);
  Vector out(components_, 0.0);
  for (int i = 0; i < 3; ++i) {
    const double dpsi = basis_eval(i, s).derivative / h;
    const std::size_t node = mesh_.unknown_node(k, i);
    for (std::size_t c = 0; c < components_; ++c) out[c] += dpsi * at(node, c);
  }
  return out;
}

void PeriodicGridFunction::evaluate(const QuadratureCache& cache, std::size_t element, int q,
                                    std::span<double> value, std::span<double> derivative) const {
  const QuadratureCache::Point& p = cache.point(element, q);
  std::fill(value.begin(), value.end(), 0.0);
  std::fill(derivative.begin(), derivative.end(), 0.0);
  for (int i = 0; i < 3; ++i) {
    const std::size_t node = mesh_.unknown_node(element, i);
    for (std::size_t c = 0; c < components_; ++c) {
      value[c] += p.psi[i] * at(node, c);
      if (!derivative.empty()) derivative[c] += p.dpsi_dt[i] * at(node, c);
    }
  }
}

void PeriodicGridFunction::write_csv(std::ostream& out, const std::vector<std::string>& names) const {
  out << "node,t";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  char buf[32];
  for (std::size_t g = 0; g < mesh_.geometric_nodes(); ++g) {
    const std::size_t j = g % mesh_.unknown_nodes();
    std::snprintf(buf, sizeof buf, "%.10g", mesh_.node_abscissa(g));
    out << g << ',' << buf;
    for (std::size_t c = 0; c < components_; ++c) {
      std::snprintf(buf, sizeof buf, "%.10g", at(j, c));
      out << ',' << buf;
    }
    out << '\n';
  }
}

DenseMatrix assemble_bilinear_advection(const Mesh& mesh) {
  const QuadratureCache cache(mesh);
  const std::size_t m = mesh.unknown_nodes();
  DenseMatrix a(m, m);
  for (std::size_t k = 0; k < mesh.n_elements(); ++k) {
    for (int q = 0; q < Gauss3::kPoints; ++q) {
      const auto& p = cache.point(k, q);
      for (int l = 0; l < 3; ++l)
        for (int j = 0; j < 3; ++j)
          a(mesh.unknown_node(k, l), mesh.unknown_node(k, j)) += p.weight * p.psi[j] * p.dpsi_dt[l];
    }
  }
  return a;
}

Vector assemble_load(const Mesh& mesh, std::size_t components,
                     const std::function<Vector(double)>& f) {
  const QuadratureCache cache(mesh);
  Vector out(mesh.unknown_nodes() * components, 0.0);
  for (std::size_t k = 0; k < mesh.n_elements(); ++k) {
    for (int q = 0; q < Gauss3::kPoints; ++q) {
      const auto& p = cache.point(k, q);
      const Vector fv = f(p.t);
      for (int l = 0; l < 3; ++l) {
        const std::size_t node = mesh.unknown_node(k, l);
        for (std::size_t c = 0; c < components; ++c)
          out[node * components + c] += p.weight * fv[c] * p.psi[l];
      }
    }
  }
  return out;
}

double l2_inner(const PeriodicGridFunction& u, const PeriodicGridFunction& v) {
  const Mesh& mesh = u.mesh();
  const QuadratureCache cache(mesh);
  const std::size_t n = u.components();
  Vector a(n), b(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < mesh.n_elements(); ++k) {
    for (int q = 0; q < Gauss3::kPoints; ++q) {
      u.evaluate(cache, k, q, a, {});
      v.evaluate(cache, k, q, b, {});
      double dot = 0.0;
      for (std::size_t c = 0; c < n; ++c) dot += a[c] * b[c];
      acc += cache.point(k, q).weight * dot;
    }
  }
  return acc;
}

}  // namespace cyclefem
