#include "cyclefem/luo_rudy.hpp"

#include <cmath>
#include <string>

#include "cyclefem/errors.hpp"

namespace cyclefem::luo_rudy {

namespace {

constexpr double kGasConstant = 8314.0;  // mJ / (mol K)
constexpr double kFaraday = 96485.0;     // C / mol

// Window (in k*x) inside which the slope of a 0/0 expression is taken from
// its series; the direct quotient loses ~eps/(k x) relative accuracy.
constexpr double kSlopeSeriesWindow = 1e-4;

// 1 / (1 + exp(s)) without overflow.
double inv_one_plus_exp(double s) {
  if (s > 0.0) {
    const double e = std::exp(-s);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(s));
}

// a exp(b (V - c)) / (1 + exp(d (V - e)))
Rate logistic_rate(double a, double b, double c, double d, double e, double v) {
  const double s = d * (v - e);
  const double frac = inv_one_plus_exp(s);  // 1 / (1 + exp(s))
  const double value = a * std::exp(b * (v - c)) * frac;
  return {value, value * (b - d * (1.0 - frac))};
}

// a exp(b (V - c))
Rate exp_rate(double a, double b, double c, double v) {
  const double value = a * std::exp(b * (v - c));
  return {value, b * value};
}

Rate operator+(Rate x, Rate y) { return {x.value + y.value, x.slope + y.slope}; }

// x / (1 - exp(-k x)), removable singularity at x = 0 with limit 1/k.
Rate x_over_one_minus_exp(double x, double k) {
  const double denom = -std::expm1(-k * x);
  Rate r;
  if (std::abs(denom) < kSingularGuard) {
    r.value = 1.0 / k + 0.5 * x + k * x * x / 12.0;
  } else {
    r.value = x / denom;
  }
  if (std::abs(k * x) < kSlopeSeriesWindow) {
    r.slope = 0.5 + k * x / 6.0;
  } else {
    r.slope = (denom - k * x * (1.0 - denom)) / (denom * denom);
  }
  return r;
}

// (exp(k x) - 1) / x, removable singularity at x = 0 with limit k.
Rate expm1_over_x(double x, double k, double denominator_factor) {
  Rate r;
  const double kx = k * x;
  if (std::abs(x * denominator_factor) < kSingularGuard) {
    r.value = k + k * kx / 2.0 + k * kx * kx / 6.0;
  } else {
    r.value = std::expm1(kx) / x;
  }
  if (std::abs(kx) < kSlopeSeriesWindow) {
    r.slope = k * k / 2.0 + k * k * kx / 3.0 + k * k * kx * kx / 8.0;
  } else {
    r.slope = (kx * std::exp(kx) - std::expm1(kx)) / (x * x);
  }
  return r;
}

GateRates h_gate(double v) {
  if (v >= -40.0) {
    return {{0.0, 0.0}, logistic_rate(1.0 / 0.13, 0.0, 0.0, -1.0 / 11.1, -10.66, v)};
  }
  return {exp_rate(0.135, -1.0 / 6.8, -80.0, v),
          exp_rate(3.56, 0.079, 0.0, v) + exp_rate(3.1e5, 0.35, 0.0, v)};
}

GateRates j_gate(double v) {
  if (v >= -40.0) {
    return {{0.0, 0.0}, logistic_rate(0.3, -2.535e-7, 0.0, -0.1, -32.0, v)};
  }
  const Rate p = exp_rate(-1.2714e5, 0.2444, 0.0, v) + exp_rate(-3.474e-5, -0.04391, 0.0, v);
  const double q = v + 37.78;
  const double s = 0.311 * (v + 79.23);
  const double dfrac = inv_one_plus_exp(s);
  const double dfrac_slope = -0.311 * dfrac * (1.0 - dfrac);
  Rate alpha;
  alpha.value = p.value * q * dfrac;
  alpha.slope = p.slope * q * dfrac + p.value * dfrac + p.value * q * dfrac_slope;
  return {alpha, logistic_rate(0.1212, -0.01052, 0.0, -0.1378, -40.14, v)};
}

GateRates m_gate(double v) {
  Rate alpha = x_over_one_minus_exp(v - kAlphaMSingularV, 0.1);
  alpha.value *= 0.32;
  alpha.slope *= 0.32;
  return {alpha, exp_rate(0.08, -1.0 / 11.0, 0.0, v)};
}

Rate x_i_factor(double v) {
  if (v <= -100.0) return {1.0, 0.0};
  constexpr double k = 0.04;
  const double e = std::exp(-0.04 * (v + 35.0));
  const Rate p = expm1_over_x(v - kXiSingularV, k, 1.0 / e);
  return {2.837 * p.value * e, 2.837 * e * (p.slope - 0.04 * p.value)};
}

std::string field_error(const char* name, double value) {
  return std::string("Luo-Rudy parameter ") + name + " = " + std::to_string(value) +
         " must be positive and finite";
}

}  // namespace

double ParameterSet::g_k() const { return 0.282 * std::sqrt(k_o / 5.4); }
double ParameterSet::g_k1() const { return 0.6047 * std::sqrt(k_o / 5.4); }
double ParameterSet::thermal_voltage() const { return kGasConstant * temperature / kFaraday; }

void ParameterSet::validate() const {
  const std::pair<const char*, double> positive[] = {
      {"c_m", c_m},   {"na_o", na_o}, {"na_i", na_i},     {"k_o", k_o},
      {"k_i", k_i},   {"temperature", temperature},
  };
  for (const auto& [name, value] : positive)
    if (!(value > 0.0) || !std::isfinite(value)) throw DomainError(field_error(name, value));
  const std::pair<const char*, double> nonnegative[] = {
      {"g_na", g_na}, {"g_si", g_si}, {"g_kp", g_kp}, {"g_b", g_b}, {"pr_nak", pr_nak},
  };
  for (const auto& [name, value] : nonnegative)
    if (!(value >= 0.0) || !std::isfinite(value))
      throw DomainError(std::string("Luo-Rudy parameter ") + name + " must be non-negative");
  if (!std::isfinite(e_b)) throw DomainError("Luo-Rudy parameter e_b must be finite");
}

RateFunctionTable rate_functions(const ParameterSet& p, double v) {
  RateFunctionTable t;
  t.gates[0] = h_gate(v);
  t.gates[1] = j_gate(v);
  t.gates[2] = m_gate(v);
  t.gates[3] = {logistic_rate(0.095, -0.01, 5.0, -0.072, 5.0, v),
                logistic_rate(0.07, -0.017, -44.0, 0.05, -44.0, v)};
  t.gates[4] = {logistic_rate(0.012, -0.008, -28.0, 0.15, -28.0, v),
                logistic_rate(0.0065, -0.02, -30.0, -0.2, -30.0, v)};
  t.gates[5] = {logistic_rate(0.0005, 0.083, -50.0, 0.057, -50.0, v),
                logistic_rate(0.0013, -0.06, -20.0, -0.04, -20.0, v)};

  const double rtf = p.thermal_voltage();
  t.e_na = rtf * std::log(p.na_o / p.na_i);
  switch (p.potassium_reversal) {
    case PotassiumReversal::kReferenceHopfData:
      t.e_k = rtf * std::log((p.k_o + p.pr_nak * p.k_i) / (p.na_o + p.pr_nak * p.na_i));
      break;
    case PotassiumReversal::kGoldman:
      t.e_k = rtf * std::log((p.k_o + p.pr_nak * p.na_o) / (p.k_i + p.pr_nak * p.na_i));
      break;
  }
  t.e_k1 = rtf * std::log(p.k_o / p.k_i);
  t.e_kp = t.e_k1;

  t.x_i = x_i_factor(v);

  const double w = v - t.e_k1;
  const Rate a_k1 = logistic_rate(1.02, 0.0, 0.0, 0.2385, 59.215, w);
  const Rate b_k1 = logistic_rate(0.49124, 0.08032, -5.476, -0.5143, -4.753, w) +
                    logistic_rate(1.0, 0.06175, 594.31, -0.5143, -4.753, w);
  const double sum = a_k1.value + b_k1.value;
  t.k1_inf.value = a_k1.value / sum;
  t.k1_inf.slope = (a_k1.slope * b_k1.value - a_k1.value * b_k1.slope) / (sum * sum);

  t.kp = logistic_rate(1.0, 0.0, 0.0, -1.0 / 5.98, 7.488, v);
  return t;
}

LuoRudyModel::LuoRudyModel(ParameterSet params) : params_(params) { params_.validate(); }

std::vector<std::string> LuoRudyModel::component_names() const {
  return {kComponentNames.begin(), kComponentNames.end()};
}

void LuoRudyModel::validate_state(std::span<const double> u) const {
  ModelSystem::validate_state(u);
  if (!(u[kCa] > 0.0))
    throw DomainError("Luo-Rudy state component Ca_i = " + std::to_string(u[kCa]) +
                      " must be positive");
}

Vector LuoRudyModel::rhs(double lambda, std::span<const double> u) const {
  validate_state(u);
  if (!std::isfinite(lambda)) throw DomainError("non-finite parameter I_st");
  const ParameterSet& p = params_;
  const double v = u[kV];
  const RateFunctionTable t = rate_functions(p, v);
  using C = CalciumConstants;

  const double m3 = u[kM] * u[kM] * u[kM];
  const double i_na = p.g_na * m3 * u[kH] * u[kJ] * (v - t.e_na);
  const double i_si = p.g_si * u[kD] * u[kF] * (v - C::c1 + C::c2 * std::log(u[kCa]));
  const double i_k = p.g_k() * u[kX] * t.x_i.value * (v - t.e_k);
  const double i_k1 = p.g_k1() * t.k1_inf.value * (v - t.e_k1);
  const double i_kp = p.g_kp * t.kp.value * (v - t.e_kp);
  const double i_b = p.g_b * (v - p.e_b);

  Vector f(kDim);
  f[kV] = -(lambda + i_na + i_si + i_k + i_k1 + i_kp + i_b) / p.c_m;
  f[kCa] = -C::c3 * i_si + C::c4 * (C::c5 - u[kCa]);
  for (std::size_t g = 0; g < 6; ++g) {
    const double a = t.gates[g].alpha.value;
    const double b = t.gates[g].beta.value;
    f[kH + g] = a - (a + b) * u[kH + g];
  }
  return f;
}

DenseMatrix LuoRudyModel::jac_u(double lambda, std::span<const double> u) const {
  validate_state(u);
  if (!std::isfinite(lambda)) throw DomainError("non-finite parameter I_st");
  const ParameterSet& p = params_;
  const double v = u[kV];
  const RateFunctionTable t = rate_functions(p, v);
  using C = CalciumConstants;

  const double m = u[kM];
  const double h = u[kH];
  const double j = u[kJ];
  const double d = u[kD];
  const double f = u[kF];
  const double x = u[kX];
  const double g_k = p.g_k();
  const double g_k1 = p.g_k1();

  const double drive_na = v - t.e_na;
  const double drive_si = v - C::c1 + C::c2 * std::log(u[kCa]);
  const double dsi_dca = p.g_si * d * f * C::c2 / u[kCa];

  // Partial derivatives of the total ionic current.
  const double di_dv = p.g_na * m * m * m * h * j + p.g_si * d * f +
                       g_k * x * (t.x_i.slope * (v - t.e_k) + t.x_i.value) +
                       g_k1 * (t.k1_inf.slope * (v - t.e_k1) + t.k1_inf.value) +
                       p.g_kp * (t.kp.slope * (v - t.e_kp) + t.kp.value) + p.g_b;

  DenseMatrix jac(kDim, kDim);
  const double inv_cm = 1.0 / p.c_m;
  jac(kV, kV) = -inv_cm * di_dv;
  jac(kV, kCa) = -inv_cm * dsi_dca;
  jac(kV, kH) = -inv_cm * p.g_na * m * m * m * j * drive_na;
  jac(kV, kJ) = -inv_cm * p.g_na * m * m * m * h * drive_na;
  jac(kV, kM) = -inv_cm * 3.0 * p.g_na * m * m * h * j * drive_na;
  jac(kV, kD) = -inv_cm * p.g_si * f * drive_si;
  jac(kV, kF) = -inv_cm * p.g_si * d * drive_si;
  jac(kV, kX) = -inv_cm * g_k * t.x_i.value * (v - t.e_k);

  jac(kCa, kV) = -C::c3 * p.g_si * d * f;
  jac(kCa, kCa) = -C::c3 * dsi_dca - C::c4;
  jac(kCa, kD) = -C::c3 * p.g_si * f * drive_si;
  jac(kCa, kF) = -C::c3 * p.g_si * d * drive_si;

  for (std::size_t g = 0; g < 6; ++g) {
    const Rate& a = t.gates[g].alpha;
    const Rate& b = t.gates[g].beta;
    const std::size_t row = kH + g;
    jac(row, kV) = a.slope - (a.slope + b.slope) * u[row];
    jac(row, row) = -(a.value + b.value);
  }
  return jac;
}

Vector LuoRudyModel::jac_lambda(double lambda, std::span<const double> u) const {
  validate_state(u);
  if (!std::isfinite(lambda)) throw DomainError("non-finite parameter I_st");
  Vector out(kDim, 0.0);
  out[kV] = -1.0 / params_.c_m;
  return out;
}

}  // namespace cyclefem::luo_rudy
