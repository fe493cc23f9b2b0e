#include "cyclefem/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cyclefem/errors.hpp"

namespace cyclefem {

double HopfPoint::period() const { return 2.0 * std::numbers::pi / beta; }

Vector hopf_residual(const ModelSystem& model, const HopfPoint& p) {
  const std::size_t n = model.dim();
  const Vector f = model.rhs(p.lambda, p.u);
  const DenseMatrix j = model.jac_u(p.lambda, p.u);
  const Vector jr = j.multiply(p.g_r);
  const Vector ji = j.multiply(p.g_i);
  Vector r(3 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = f[i];
    r[n + i] = jr[i] + p.beta * p.g_i[i];
    r[2 * n + i] = ji[i] - p.beta * p.g_r[i];
  }
  r[3 * n] = p.g_r[p.k] - 1.0;
  r[3 * n + 1] = p.g_i[p.k];
  return r;
}

HopfPoint hopf_initial_guess(const ModelSystem& model, double lambda, std::span<const double> u,
                             const HopfGuessOptions& options) {
  const std::size_t n = model.dim();
  const DenseMatrix j = model.jac_u(lambda, u);
  const ComplexEigenvalueList ev = eigenvalues_qr(j);
  std::optional<Complex> mu;
  for (const Complex& z : ev)
    if (z.imag() > 0.0 && (!mu || std::abs(z.real()) < std::abs(mu->real()))) mu = z;
  if (!mu || std::abs(mu->real()) > options.axis_tolerance * mu->imag())
    throw NotHopfError("no complex eigenvalue pair near the imaginary axis at lambda = " +
                       std::to_string(lambda));

  ComplexVector g = eigenvector_inverse_iteration(j, *mu);
  std::size_t k = 0;
  if (options.k) {
    k = *options.k;
    if (k >= n) throw ConfigError("Hopf normalization index out of range");
    double largest = 0.0;
    for (const Complex& c : g) largest = std::max(largest, std::abs(c));
    if (std::abs(g[k]) <= 1e-10 * largest)
      throw NotHopfError("eigenvector component " + std::to_string(k + 1) + " vanishes; choose another k");
  } else {
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(g[i]) > std::abs(g[k])) k = i;
  }
  const Complex scale = g[k];
  for (Complex& c : g) c /= scale;

  HopfPoint p;
  p.lambda = lambda;
  p.beta = mu->imag();
  p.u.assign(u.begin(), u.end());
  p.k = k;
  p.g_r.resize(n);
  p.g_i.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.g_r[i] = g[i].real();
    p.g_i[i] = g[i].imag();
  }
  p.g_r[k] = 1.0;
  p.g_i[k] = 0.0;
  p.residual = norm_inf(hopf_residual(model, p));
  return p;
}

HopfPoint refine_hopf(const ModelSystem& model, HopfPoint p, const HopfRefineOptions& options) {
  const std::size_t n = model.dim();
  const std::size_t dim = 3 * n + 2;
  // Unknown order: lambda, beta, u, g_r, g_i.
  const std::size_t iu = 2, ir = 2 + n, ii = 2 + 2 * n;
  std::vector<double> history;
  for (int it = 0;; ++it) {
    const Vector r = hopf_residual(model, p);
    p.residual = norm_inf(r);
    history.push_back(p.residual);
    if (p.residual <= options.tol) return p;
    if (it >= options.max_iter)
      throw ConvergenceError("Hopf Newton did not converge in " + std::to_string(options.max_iter) + " iterations",
                             history);

    const DenseMatrix j = model.jac_u(p.lambda, p.u);
    const Vector jl = model.jac_lambda(p.lambda, p.u);
    DenseMatrix m(dim, dim);
    for (std::size_t row = 0; row < n; ++row) {
      m(row, 0) = jl[row];
      for (std::size_t c = 0; c < n; ++c) {
        m(row, iu + c) = j(row, c);
        m(n + row, ir + c) = j(row, c);
        m(2 * n + row, ii + c) = j(row, c);
      }
      m(n + row, 1) = p.g_i[row];
      m(2 * n + row, 1) = -p.g_r[row];
      m(n + row, ii + row) = p.beta;
      m(2 * n + row, ir + row) = -p.beta;
    }
    // Second-derivative terms by central differences of jac_u.
    const auto directional = [&](double lambda_p, double lambda_m, std::span<const double> up,
                                 std::span<const double> um, double h, std::size_t col) {
      const DenseMatrix jp = model.jac_u(lambda_p, up);
      const DenseMatrix jm = model.jac_u(lambda_m, um);
      const Vector ar = jp.multiply(p.g_r), br = jm.multiply(p.g_r);
      const Vector ai = jp.multiply(p.g_i), bi = jm.multiply(p.g_i);
      for (std::size_t row = 0; row < n; ++row) {
        m(n + row, col) = (ar[row] - br[row]) / (2.0 * h);
        m(2 * n + row, col) = (ai[row] - bi[row]) / (2.0 * h);
      }
    };
    {
      const double h = options.fd_step * std::max(1.0, std::abs(p.lambda));
      directional(p.lambda + h, p.lambda - h, p.u, p.u, h, 0);
    }
    Vector up(p.u), um(p.u);
    for (std::size_t c = 0; c < n; ++c) {
      const double h = options.fd_step * std::max(1.0, std::abs(p.u[c]));
      up[c] = p.u[c] + h;
      um[c] = p.u[c] - h;
      directional(p.lambda, p.lambda, up, um, h, iu + c);
      up[c] = um[c] = p.u[c];
    }
    m(3 * n, ir + p.k) = 1.0;
    m(3 * n + 1, ii + p.k) = 1.0;

    Vector rhs(r);
    for (double& v : rhs) v = -v;
    Vector dx;
    try {
      dx = lu_solve(m, rhs);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError(e.pivot(), std::string("extended Hopf system is singular (") + e.what() +
                                               "); choose a different normalization index k");
    }
    p.lambda += dx[0];
    p.beta += dx[1];
    for (std::size_t c = 0; c < n; ++c) {
      p.u[c] += dx[iu + c];
      p.g_r[c] += dx[ir + c];
      p.g_i[c] += dx[ii + c];
    }
    if (p.beta < 0.0) {
      p.beta = -p.beta;
      for (double& v : p.g_i) v = -v;
    }
  }
}

namespace {

void write_list(std::ostream& out, const char* key, const Vector& v) {
  char buf[40];
  out << key << " =";
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << (i ? ", " : " ") << buf;
  }
  out << '\n';
}

Vector parse_list(const std::string& text) {
  Vector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw IoError("bad number '" + item + "' in Hopf point file");
    }
  }
  return v;
}

double parse_scalar(const std::string& key, const std::string& text) {
  const Vector v = parse_list(text);
  if (v.size() != 1) throw IoError("Hopf point file: '" + key + "' needs exactly one number");
  return v[0];
}

}  // namespace

void write_hopf_point(std::ostream& out, const HopfPoint& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p.lambda);
  out << "lambda = " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", p.beta);
  out << "beta = " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.17g", p.period());
  out << "period = " << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.3e", p.residual);
  out << "residual = " << buf << '\n';
  out << "k = " << p.k + 1 << '\n';
  write_list(out, "u", p.u);
  write_list(out, "g_r", p.g_r);
  write_list(out, "g_i", p.g_i);
}

HopfPoint read_hopf_point(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) throw IoError("malformed line in Hopf point file: " + line);
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"lambda", "beta", "k", "u", "g_r", "g_i"})
    if (!kv.count(key)) throw IoError(std::string("Hopf point file lacks '") + key + "'");
  HopfPoint p;
  p.lambda = parse_scalar("lambda", kv["lambda"]);
  p.beta = parse_scalar("beta", kv["beta"]);
  p.u = parse_list(kv["u"]);
  p.g_r = parse_list(kv["g_r"]);
  p.g_i = parse_list(kv["g_i"]);
  const double k = parse_scalar("k", kv["k"]);
  if (p.g_r.size() != p.u.size() || p.g_i.size() != p.u.size() || k < 1 ||
      k > static_cast<double>(p.u.size()) || k != std::floor(k))
    throw IoError("inconsistent Hopf point file");
  if (!(p.beta > 0.0)) throw IoError("Hopf point file has non-positive beta");
  p.k = static_cast<std::size_t>(k) - 1;
  if (kv.count("residual")) p.residual = parse_scalar("residual", kv["residual"]);
  return p;
}

}  // namespace cyclefem
