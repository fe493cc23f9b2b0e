#pragma once

// Luo-Rudy I ventricular cardiomyocyte model as a one-parameter system in
// the stimulus current lambda = I_st (uA/cm^2).
//
// State ordering (0-based here, u_1..u_8 in the usual notation):
//   0 V     membrane potential (mV)
//   1 Ca_i  intracellular calcium (mM), must stay > 0
//   2 h     fast Na inactivation
//   3 j     slow Na inactivation
//   4 m     Na activation
//   5 d     slow inward activation
//   6 f     slow inward inactivation
//   7 X     time-dependent K activation
//
//   dV/dt    = -(1/C_m) [I_st + I_Na + I_si + I_K + I_K1 + I_Kp + I_b]
//   dCa_i/dt = -c3 I_si + c4 (c5 - Ca_i)
//   dy/dt    = alpha_y(V) - (alpha_y(V) + beta_y(V)) y,   y = h, j, m, d, f, X

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cyclefem/model.hpp"

namespace cyclefem::luo_rudy {

inline constexpr std::size_t kDim = 8;

enum Component : std::size_t { kV = 0, kCa = 1, kH = 2, kJ = 3, kM = 4, kD = 5, kF = 6, kX = 7 };

inline constexpr std::array<const char*, kDim> kComponentNames{"V", "Ca_i", "h", "j",
                                                               "m", "d",    "f", "X"};

/// Form of the time-dependent potassium reversal potential E_K.
enum class PotassiumReversal {
  /// E_K = (RT/F) ln((K_o + PR_NaK K_i) / (Na_o + PR_NaK Na_i)). This is the
  /// variant that reproduces the reference Hopf point at I_st = -1.0140472901
  /// and its Jacobian spectrum; the textbook form misses both by ~1e-3.
  kReferenceHopfData,
  /// Goldman form E_K = (RT/F) ln((K_o + PR_NaK Na_o) / (K_i + PR_NaK Na_i)).
  kGoldman,
};

/// Fixed model parameters (everything except I_st, which is the
/// continuation parameter). Defaults are the reference parameter set.
struct ParameterSet {
  double c_m = 1.0;          // uF/cm^2
  double g_na = 23.0;        // mS/cm^2
  double g_si = 0.09;
  double g_kp = 0.0183;
  double g_b = 0.03921;
  double na_o = 140.0;       // mM
  double na_i = 18.0;
  double k_o = 5.4;
  double k_i = 145.0;
  double pr_nak = 0.01833;
  double e_b = -59.87;       // mV
  double temperature = 310.0;  // K
  PotassiumReversal potassium_reversal = PotassiumReversal::kReferenceHopfData;

  double g_k() const;   // 0.282 sqrt(K_o / 5.4)
  double g_k1() const;  // 0.6047 sqrt(K_o / 5.4)
  double thermal_voltage() const;  // RT/F in mV

  /// Throws DomainError naming the first invalid field.
  void validate() const;
};

/// A rate or voltage function value together with its derivative in V.
struct Rate {
  double value = 0.0;
  double slope = 0.0;
};

struct GateRates {
  Rate alpha;
  Rate beta;
};

/// All voltage-dependent ingredients of the right-hand side at one V.
struct RateFunctionTable {
  std::array<GateRates, 6> gates;  // h, j, m, d, f, X
  Rate x_i;                        // I_K inward rectification factor
  Rate k1_inf;                     // I_K1 steady-state gate
  Rate kp;                         // I_Kp plateau factor
  double e_na = 0.0;
  double e_k = 0.0;
  double e_k1 = 0.0;
  double e_kp = 0.0;
};

/// Constants of the calcium balance and the slow inward reversal potential
/// E_si = c1 - c2 ln Ca_i.
struct CalciumConstants {
  static constexpr double c1 = 7.7;
  static constexpr double c2 = 13.0287;
  static constexpr double c3 = 1e-4;
  static constexpr double c4 = 0.07;
  static constexpr double c5 = 1e-4;
};

/// Removable singularities are evaluated by series when the vanishing
/// denominator is smaller than this.
inline constexpr double kSingularGuard = 1e-7;

/// Voltages where a rate expression has a removable 0/0.
inline constexpr double kAlphaMSingularV = -47.13;
inline constexpr double kXiSingularV = -77.0;

RateFunctionTable rate_functions(const ParameterSet& params, double v);

class LuoRudyModel final : public ModelSystem {
 public:
  explicit LuoRudyModel(ParameterSet params = {});

  const ParameterSet& parameters() const noexcept { return params_; }

  std::size_t dim() const override { return kDim; }
  Vector rhs(double lambda, std::span<const double> u) const override;
  DenseMatrix jac_u(double lambda, std::span<const double> u) const override;
  Vector jac_lambda(double lambda, std::span<const double> u) const override;
  std::vector<std::string> component_names() const override;
  void validate_state(std::span<const double> u) const override;

 private:
  ParameterSet params_;
};

}  // namespace cyclefem::luo_rudy
