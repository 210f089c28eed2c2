// field.hpp — real-space profile phi_x(t) = <0|a_x|Psi(t)> of the emitted photon
//
// phi_x(t) = (1/2pi) int dk c_k e^{-i w_k t} <0|a_x|Psi_k>
//          + sum_+- c_+- e^{-i w_+- t} N_+- eta_+-^|x|,
// with the plane-wave forms t e^{ikx} on the far side of the impurity and
// e^{ikx} + r e^{-ikx} on the near side. The profile is parity symmetric.

#pragma once

#include "wqed/model.hpp"

#include <string>
#include <vector>

namespace wqed {

struct FieldProfile {
    std::vector<long> positions;  // -L .. L
    std::vector<cplx> amplitudes;
    double time{0.0};
    double x_max{0.0};        // causal bound 2 J t
    cplx c_e;                 // exciton amplitude at the same time
    double leaked_norm{0.0};  // 1 - sum |phi|^2 - |c_e|^2, clipped at zero
    std::string warning;      // empty unless the window cuts the causal cone

    cplx at(long x) const;
};

// Extra sites beyond the causal cone required to avoid a truncation warning.
inline constexpr long kConeMargin = 20;
// Leaked norm above which a truncation warning is emitted.
inline constexpr double kLeakTolerance = 1e-6;

// Lossless parameters with g > 0. Accurate to about tol per site.
FieldProfile field_profile(double t, long half_width, const ModelParams& params,
                           double tol = 1e-11);

// |sum |phi_x|^2 + |c_e|^2 - 1|
double profile_norm_check(const FieldProfile& profile, cplx c_e_t);

// Least-squares slope of log|phi_x|^2 against |x| over x_max < |x| < 1.5 x_max,
// skipping amplitudes below 1e-14. Negative for a profile confined to the cone.
double outside_cone_slope(const FieldProfile& profile);

}  // namespace wqed
