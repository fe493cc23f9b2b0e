#include "cyclefem/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "cyclefem/errors.hpp"

namespace cyclefem {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double magnitude(double x) { return std::abs(x); }
double magnitude(const Complex& z) { return std::abs(z); }

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace

template <class T>
BasicMatrix<T>::BasicMatrix(std::size_t rows, std::size_t cols, T fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

template <class T>
BasicMatrix<T> BasicMatrix<T>::identity(std::size_t n) {
  BasicMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
  return m;
}

template <class T>
void BasicMatrix<T>::fill(T value) {
  std::fill(data_.begin(), data_.end(), value);
}

template <class T>
std::vector<T> BasicMatrix<T>::multiply(std::span<const T> x) const {
  if (x.size() != cols_) throw ConfigError("matrix-vector size mismatch");
  std::vector<T> y(rows_, T{});
  for (std::size_t r = 0; r < rows_; ++r) {
    T acc{};
    const T* a = data_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) acc += a[c] * x[c];
    y[r] = acc;
  }
  return y;
}

template <class T>
BasicMatrix<T> BasicMatrix<T>::multiply(const BasicMatrix& other) const {
  if (other.rows_ != cols_) throw ConfigError("matrix-matrix size mismatch");
  BasicMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const T a = (*this)(r, k);
      if (a == T{}) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) out(r, c) += a * other(k, c);
    }
  return out;
}

template <class T>
BasicMatrix<T> BasicMatrix<T>::transpose() const {
  BasicMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

template <class T>
double BasicMatrix<T>::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (const T& v : row(r)) s += magnitude(v);
    best = std::max(best, s);
  }
  return best;
}

template class BasicMatrix<double>;
template class BasicMatrix<Complex>;

template <class T>
LuFactorization<T>::LuFactorization(BasicMatrix<T> a) : lu_(std::move(a)) {
  const std::size_t n = lu_.rows();
  if (n == 0 || lu_.cols() != n) throw ConfigError("LU needs a non-empty square matrix");
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  double amax = 0.0;
  for (const T& v : lu_.data()) amax = std::max(amax, magnitude(v));
  const double tiny = static_cast<double>(n) * kEps * amax;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = magnitude(lu_(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double m = magnitude(lu_(r, k));
      if (m > best) {
        best = m;
        p = r;
      }
    }
    if (best <= tiny || !std::isfinite(best)) {
      throw SingularMatrixError(
          k, "singular matrix: pivot " + std::to_string(k) + " of " + std::to_string(n) +
                 " vanishes to working precision");
    }
    if (p != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
      std::swap(perm_[k], perm_[p]);
    }
    const T pivot = lu_(k, k);
    auto pivot_row = lu_.row(k);
    for (std::size_t r = k + 1; r < n; ++r) {
      T& lead = lu_(r, k);
      if (lead == T{}) continue;
      lead /= pivot;
      const T f = lead;
      auto target = lu_.row(r);
      for (std::size_t c = k + 1; c < n; ++c) target[c] -= f * pivot_row[c];
    }
  }
}

template <class T>
std::vector<T> LuFactorization<T>::solve(std::span<const T> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw ConfigError("LU solve: right-hand side has wrong length");
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    auto r = lu_.row(i);
    T acc = x[i];
    for (std::size_t c = 0; c < i; ++c) acc -= r[c] * x[c];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    auto r = lu_.row(i);
    T acc = x[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= r[c] * x[c];
    x[i] = acc / r[i];
  }
  return x;
}

template class LuFactorization<double>;
template class LuFactorization<Complex>;

Vector lu_solve(const DenseMatrix& a, std::span<const double> b) {
  return LuFactorization<double>(a).solve(b);
}

ComplexVector lu_solve(const ComplexMatrix& a, std::span<const Complex> b) {
  return LuFactorization<Complex>(a).solve(b);
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Diagonal similarity by powers of two so that row and column norms are
// comparable; improves eigenvalue accuracy for badly scaled Jacobians.
void balance(DenseMatrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

}  // namespace

DenseMatrix hessenberg_reduce(DenseMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ConfigError("Hessenberg reduction needs a square matrix");
  Vector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k + 1, k) > 0.0) alpha = -alpha;
    std::fill(v.begin(), v.end(), 0.0);
    v[k + 1] = a(k + 1, k) - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;
    // a <- (I - beta v v^T) a
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s *= beta;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    // a <- a (I - beta v v^T)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= beta;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
  return a;
}

ComplexEigenvalueList eigenvalues_qr(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (n == 0 || input.cols() != n) throw ConfigError("eigenvalues_qr needs a square matrix");
  for (double v : input.data())
    if (!std::isfinite(v)) throw DomainError("eigenvalues_qr: non-finite matrix entry");

  DenseMatrix a = input;
  balance(a);
  a = hessenberg_reduce(std::move(a));

  constexpr double kDeflation = 1e-12;
  const int cap = 100 * static_cast<int>(n);

  Vector wr(n, 0.0);
  Vector wi(n, 0.0);
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i > 0 ? i - 1 : 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = static_cast<int>(n) - 1;
  int its = 0;
  int total = 0;
  double shift = 0.0;
  while (nn >= 0) {
    int l = nn;
    for (; l >= 1; --l) {
      double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(a(l, l - 1)) <= kDeflation * s) {
        a(l, l - 1) = 0.0;
        break;
      }
    }
    double x = a(nn, nn);
    if (l == nn) {
      wr[nn] = x + shift;
      wi[nn] = 0.0;
      --nn;
      its = 0;
      continue;
    }
    double y = a(nn - 1, nn - 1);
    double w = a(nn, nn - 1) * a(nn - 1, nn);
    if (l == nn - 1) {
      const double p = 0.5 * (y - x);
      const double q = p * p + w;
      double z = std::sqrt(std::abs(q));
      x += shift;
      if (q >= 0.0) {
        z = p + sign_of(z, p);
        wr[nn - 1] = wr[nn] = x + z;
        if (z != 0.0) wr[nn] = x - w / z;
        wi[nn - 1] = wi[nn] = 0.0;
      } else {
        wr[nn - 1] = wr[nn] = x + p;
        wi[nn - 1] = z;
        wi[nn] = -z;
      }
      nn -= 2;
      its = 0;
      continue;
    }

    if (total >= cap) {
      throw ConvergenceError("eigenvalues_qr: no convergence for the active block ending at row " +
                                 std::to_string(nn) + " after " + std::to_string(total) +
                                 " iterations",
                             {});
    }
    if (its == 10 || its == 20) {
      shift += x;
      for (int i = 0; i <= nn; ++i) a(i, i) -= x;
      const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
      y = x = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++its;
    ++total;

    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
    int m = nn - 2;
    for (; m >= l; --m) {
      z = a(m, m);
      r = x - z;
      double s = y - z;
      p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
      q = a(m + 1, m + 1) - z - r - s;
      r = a(m + 2, m + 1);
      s = std::abs(p) + std::abs(q) + std::abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
      const double v =
          std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
      if (u <= kEps * v) break;
    }
    for (int i = m + 2; i <= nn; ++i) {
      a(i, i - 2) = 0.0;
      if (i != m + 2) a(i, i - 3) = 0.0;
    }
    for (int k = m; k <= nn - 1; ++k) {
      if (k != m) {
        p = a(k, k - 1);
        q = a(k + 1, k - 1);
        r = 0.0;
        if (k != nn - 1) r = a(k + 2, k - 1);
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x != 0.0) {
          p /= x;
          q /= x;
          r /= x;
        }
      }
      const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
      if (s == 0.0) continue;
      if (k == m) {
        if (l != m) a(k, k - 1) = -a(k, k - 1);
      } else {
        a(k, k - 1) = -s * x;
      }
      p += s;
      x = p / s;
      y = q / s;
      z = r / s;
      q /= p;
      r /= p;
      for (int j = k; j <= nn; ++j) {
        double t = a(k, j) + q * a(k + 1, j);
        if (k != nn - 1) {
          t += r * a(k + 2, j);
          a(k + 2, j) -= t * z;
        }
        a(k + 1, j) -= t * y;
        a(k, j) -= t * x;
      }
      const int mmin = nn < k + 3 ? nn : k + 3;
      for (int i = l; i <= mmin; ++i) {
        double t = x * a(i, k) + y * a(i, k + 1);
        if (k != nn - 1) {
          t += z * a(i, k + 2);
          a(i, k + 2) -= t * r;
        }
        a(i, k + 1) -= t * q;
        a(i, k) -= t;
      }
    }
  }

  ComplexEigenvalueList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (wi[i] != 0.0 && i + 1 < n && wi[i + 1] == -wi[i]) {
      const double im = std::abs(wi[i]);
      out.emplace_back(wr[i], im);
      out.emplace_back(wr[i + 1], -im);
      ++i;
    } else {
      out.emplace_back(wr[i], wi[i]);
    }
  }
  return out;
}

ComplexVector eigenvector_inverse_iteration(const DenseMatrix& a, Complex mu, int iterations) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw ConfigError("inverse iteration needs a square matrix");
  const double scale = std::max(a.norm_inf(), 1.0);
  // Nudge the shift off the exact eigenvalue so the factorization exists.
  Complex shift = mu + Complex(scale * 1e-13, scale * 1e-13);
  ComplexMatrix b(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) b(r, c) = a(r, c);
  std::optional<LuFactorization<Complex>> lu;
  for (int attempt = 0; attempt < 4 && !lu; ++attempt) {
    ComplexMatrix shifted = b;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= shift;
    try {
      lu.emplace(std::move(shifted));
    } catch (const SingularMatrixError&) {
      shift += Complex(scale * 1e-10, 0.0);
    }
  }
  if (!lu) throw SingularMatrixError(0, "inverse iteration: shifted matrix stays singular");

  ComplexVector x(n, Complex(1.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) x[i] += Complex(0.0, 1e-3 * static_cast<double>(i + 1));
  for (int it = 0; it < iterations; ++it) {
    x = lu->solve(x);
    double nrm = 0.0;
    for (const Complex& v : x) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw ConvergenceError("inverse iteration produced a degenerate vector", {});
    for (Complex& v : x) v /= nrm;
  }
  return x;
}

}  // namespace cyclefem
