#pragma once

// Dense linear algebra used by the Newton solvers: a row-major matrix,
// LU with partial pivoting (real and complex), the QR algorithm for
// eigenvalues and inverse iteration for eigenvectors.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cyclefem {

using Vector = std::vector<double>;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using ComplexEigenvalueList = std::vector<Complex>;

template <class T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols, T fill = T{});

  static BasicMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const T> data() const noexcept { return data_; }

  void fill(T value);

  std::vector<T> multiply(std::span<const T> x) const;
  BasicMatrix multiply(const BasicMatrix& other) const;
  BasicMatrix transpose() const;

  /// Max absolute row sum.
  double norm_inf() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using DenseMatrix = BasicMatrix<double>;
using ComplexMatrix = BasicMatrix<Complex>;

/// LU factorization with partial pivoting, reusable for several right-hand
/// sides. Throws SingularMatrixError if a pivot is zero to working precision
/// (|pivot| <= n * eps * max|a_ij|).
template <class T>
class LuFactorization {
 public:
  explicit LuFactorization(BasicMatrix<T> a);

  std::vector<T> solve(std::span<const T> b) const;
  std::size_t size() const noexcept { return lu_.rows(); }

 private:
  BasicMatrix<T> lu_;
  std::vector<std::size_t> perm_;
};

Vector lu_solve(const DenseMatrix& a, std::span<const double> b);
ComplexVector lu_solve(const ComplexMatrix& a, std::span<const Complex> b);

/// All eigenvalues of a real square matrix: balancing, Householder
/// reduction to Hessenberg form, then Francis double-shift QR with
/// deflation at 1e-12 relative to the neighbouring diagonal. Complex
/// eigenvalues come out as adjacent conjugate pairs (positive imaginary part
/// first). Throws ConvergenceError after 100*n iterations.
ComplexEigenvalueList eigenvalues_qr(const DenseMatrix& a);

/// Eigenvector for an (approximate) eigenvalue `mu` by shifted inverse
/// iteration in complex arithmetic. The result has unit 2-norm.
ComplexVector eigenvector_inverse_iteration(const DenseMatrix& a, Complex mu,
                                            int iterations = 3);

/// Reduce to upper Hessenberg form by Householder reflections (similarity).
DenseMatrix hessenberg_reduce(DenseMatrix a);

double norm_inf(std::span<const double> x);

}  // namespace cyclefem
