#pragma once

#include <array>

// Reference Luo-Rudy Hopf point and the spectrum of the Jacobian there.
namespace reference {

inline constexpr double kLambda = -1.0140472901;
inline constexpr double kBeta = 0.0162886062;

inline constexpr std::array<double, 8> kU{-24.3132508542, 0.0034641214, 0.0,          0.0,
                                          0.9176777444,   0.5025242162, 0.4920204612, 0.5071561613};
inline constexpr std::array<double, 8> kGr{1.0,          0.0000468233, 0.0,           0.0,
                                           0.0093195354, 0.0198748652, -0.0072420216, 0.0001706577};
inline constexpr std::array<double, 8> kGi{0.0,           0.0000029062,  0.0,          0.0,
                                           -0.0000171311, -0.0118192370, 0.0136415789, -0.0017802907};

inline constexpr std::array<double, 6> kRealEigenvalues{-8.8611865338, -0.1026761869, -0.0647560667,
                                                        -0.0024565181, -1.7398266947, -0.2049715178};

}  // namespace reference
