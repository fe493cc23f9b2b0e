#include "luo_rudy_oracle.hpp"

#include <cmath>

namespace oracle {

std::array<double, 8> luo_rudy_rhs(double i_st, const std::array<double, 8>& u) {
  const double V = u[0], Ca = u[1], h = u[2], j = u[3], m = u[4], d = u[5], f = u[6], X = u[7];
  const double Nao = 140, Nai = 18, Ko = 5.4, Ki = 145, PR = 0.01833;
  const double RTF = 8314.0 * 310.0 / 96485.0;
  const double ENa = RTF * std::log(Nao / Nai);
  const double EK = RTF * std::log((Ko + PR * Ki) / (Nao + PR * Nai));
  const double EK1 = RTF * std::log(Ko / Ki);
  const double gK = 0.282 * std::sqrt(Ko / 5.4);
  const double gK1 = 0.6047 * std::sqrt(Ko / 5.4);

  double ah, bh, aj, bj;
  if (V >= -40) {
    ah = 0;
    aj = 0;
    bh = 1 / (0.13 * (1 + std::exp((V + 10.66) / -11.1)));
    bj = 0.3 * std::exp(-2.535e-7 * V) / (1 + std::exp(-0.1 * (V + 32)));
  } else {
    ah = 0.135 * std::exp((80 + V) / -6.8);
    bh = 3.56 * std::exp(0.079 * V) + 3.1e5 * std::exp(0.35 * V);
    aj = (-1.2714e5 * std::exp(0.2444 * V) - 3.474e-5 * std::exp(-0.04391 * V)) * (V + 37.78) /
         (1 + std::exp(0.311 * (V + 79.23)));
    bj = 0.1212 * std::exp(-0.01052 * V) / (1 + std::exp(-0.1378 * (V + 40.14)));
  }
  const double am = 0.32 * (V + 47.13) / (1 - std::exp(-0.1 * (V + 47.13)));
  const double bm = 0.08 * std::exp(-V / 11);
  const double ad = 0.095 * std::exp(-0.01 * (V - 5)) / (1 + std::exp(-0.072 * (V - 5)));
  const double bd = 0.07 * std::exp(-0.017 * (V + 44)) / (1 + std::exp(0.05 * (V + 44)));
  const double af = 0.012 * std::exp(-0.008 * (V + 28)) / (1 + std::exp(0.15 * (V + 28)));
  const double bf = 0.0065 * std::exp(-0.02 * (V + 30)) / (1 + std::exp(-0.2 * (V + 30)));
  const double ax = 0.0005 * std::exp(0.083 * (V + 50)) / (1 + std::exp(0.057 * (V + 50)));
  const double bx = 0.0013 * std::exp(-0.06 * (V + 20)) / (1 + std::exp(-0.04 * (V + 20)));

  const double Esi = 7.7 - 13.0287 * std::log(Ca);
  const double Xi = V > -100 ? 2.837 * (std::exp(0.04 * (V + 77)) - 1) / ((V + 77) * std::exp(0.04 * (V + 35)))
                             : 1.0;
  const double ak1 = 1.02 / (1 + std::exp(0.2385 * (V - EK1 - 59.215)));
  const double bk1 = (0.49124 * std::exp(0.08032 * (V - EK1 + 5.476)) + std::exp(0.06175 * (V - EK1 - 594.31))) /
                     (1 + std::exp(-0.5143 * (V - EK1 + 4.753)));
  const double K1 = ak1 / (ak1 + bk1);
  const double Kp = 1 / (1 + std::exp((7.488 - V) / 5.98));

  const double INa = 23 * m * m * m * h * j * (V - ENa);
  const double Isi = 0.09 * d * f * (V - Esi);
  const double IK = gK * X * Xi * (V - EK);
  const double IK1 = gK1 * K1 * (V - EK1);
  const double IKp = 0.0183 * Kp * (V - EK1);
  const double Ib = 0.03921 * (V + 59.87);

  return {-(i_st + INa + Isi + IK + IK1 + IKp + Ib),
          -1e-4 * Isi + 0.07 * (1e-4 - Ca),
          ah - (ah + bh) * h,
          aj - (aj + bj) * j,
          am - (am + bm) * m,
          ad - (ad + bd) * d,
          af - (af + bf) * f,
          ax - (ax + bx) * X};
}

}  // namespace oracle
