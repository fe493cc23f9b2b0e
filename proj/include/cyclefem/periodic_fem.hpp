#pragma once

// Continuous piecewise-quadratic functions on a uniform periodic mesh of
// [0, 1]. Element K has local nodes 0 (left end), 1 (midpoint), 2 (right
// end); geometric node 2K + i. The last geometric node t = 1 is the same
// unknown as node 0, so there are 2 * n_elements unknown nodes.

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cyclefem/dense.hpp"
#include "cyclefem/quadrature.hpp"

namespace cyclefem {

class Mesh {
 public:
  /// Throws ConfigError if n_elements < 2.
  explicit Mesh(int n_elements);

  std::size_t n_elements() const noexcept { return n_elements_; }
  double element_length() const noexcept { return 1.0 / static_cast<double>(n_elements_); }
  std::size_t geometric_nodes() const noexcept { return 2 * n_elements_ + 1; }
  std::size_t unknown_nodes() const noexcept { return 2 * n_elements_; }

  double node_abscissa(std::size_t geometric_node) const;
  double element_left(std::size_t element) const;

  /// L(K, i): geometric node of local node i in element K.
  std::size_t global_node(std::size_t element, int local) const;
  /// Unknown index after the periodic identification.
  std::size_t unknown_node(std::size_t element, int local) const;

  /// Element containing t in [0, 1]; t = 1 belongs to the last element.
  std::size_t locate(double t) const;

 private:
  std::size_t n_elements_;
};

Mesh build_mesh(int n_elements);

struct BasisValue {
  double value;
  double derivative;  // d/ds on the reference element
};

/// Quadratic Lagrange basis on [0, 1] with nodes 0, 1/2, 1.
BasisValue basis_eval(int local, double s);

/// Gauss points of every element with the basis tabulated there.
class QuadratureCache {
 public:
  struct Point {
    double t;
    double weight;                  // includes the element length
    std::array<double, 3> psi;
    std::array<double, 3> dpsi_dt;  // physical derivative
  };

  explicit QuadratureCache(const Mesh& mesh);

  const Point& point(std::size_t element, int q) const { return points_[element * Gauss3::kPoints + q]; }

 private:
  std::vector<Point> points_;
};

/// Nodal values of an n-component periodic P2 function, node-major:
/// value(node, c) lives at index node * components + c.
class PeriodicGridFunction {
 public:
  PeriodicGridFunction(const Mesh& mesh, std::size_t components);
  PeriodicGridFunction(const Mesh& mesh, std::size_t components, Vector values);

  /// Sample f at the unknown nodes.
  static PeriodicGridFunction sample(const Mesh& mesh, std::size_t components,
                                     const std::function<Vector(double)>& f);
  static PeriodicGridFunction constant(const Mesh& mesh, std::span<const double> value);

  const Mesh& mesh() const noexcept { return mesh_; }
  std::size_t components() const noexcept { return components_; }

  double& at(std::size_t node, std::size_t c) { return values_[node * components_ + c]; }
  double at(std::size_t node, std::size_t c) const { return values_[node * components_ + c]; }
  std::span<const double> node(std::size_t node) const {
    return {values_.data() + node * components_, components_};
  }
  Vector& values() noexcept { return values_; }
  const Vector& values() const noexcept { return values_; }

  /// Value at t in [0, 1]; throws DomainError outside.
  Vector interpolate(double t) const;
  Vector derivative(double t) const;

  /// Value and time derivative at Gauss point q of an element.
  void evaluate(const QuadratureCache& cache, std::size_t element, int q, std::span<double> value,
                std::span<double> derivative) const;

  /// Columns: node, t, then one per component. The alias node t = 1 is
  /// written as well so plots close up.
  void write_csv(std::ostream& out, const std::vector<std::string>& names) const;

 private:
  Mesh mesh_;
  std::size_t components_;
  Vector values_;
};

/// A(l, j) = int_0^1 psi_j psi_l' dt over the unknown nodes (row = test function l).
DenseMatrix assemble_bilinear_advection(const Mesh& mesh);

/// Entry (l, c) = int_0^1 f_c(t) psi_l(t) dt, node-major like PeriodicGridFunction.
Vector assemble_load(const Mesh& mesh, std::size_t components,
                     const std::function<Vector(double)>& f);

/// L2 inner product int_0^1 <u, v> dt by 3-point Gauss.
double l2_inner(const PeriodicGridFunction& u, const PeriodicGridFunction& v);

}  // namespace cyclefem
