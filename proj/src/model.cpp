#include "wqed/model.hpp"

#include "wqed/errors.hpp"

#include <cmath>
#include <string>

namespace wqed {

Momentum::Momentum(double k) noexcept {
    constexpr double two_pi = 2.0 * pi;
    if (k >= -pi && k < pi) {
        k_ = k;
        return;
    }
    double w = k - two_pi * std::floor((k + pi) / two_pi);
    if (w >= pi) w -= two_pi;  // rounding at the upper end
    k_ = w;
}

ModelParams validate(const ModelParams& params) {
    const double values[] = {params.delta, params.epsilon, params.j_hop,
                             params.g,     params.gamma_e, params.gamma_c};
    for (double v : values) {
        if (!std::isfinite(v)) throw ParameterError("non-finite parameter value");
    }
    if (params.j_hop <= 0.0) throw ParameterError("zero bandwidth: hopping J must be positive");
    if (params.g < 0.0) throw ParameterError("negative coupling g");
    if (params.gamma_e < 0.0) throw ParameterError("negative exciton loss rate gamma_e");
    if (params.gamma_c < 0.0) throw ParameterError("negative cavity loss rate gamma_c");
    return params;
}

double dispersion(Momentum k, const ModelParams& params) noexcept {
    return params.epsilon - 2.0 * params.j_hop * std::cos(k.value());
}

double group_velocity(Momentum k, const ModelParams& params) noexcept {
    return 2.0 * params.j_hop * std::sin(k.value());
}

bool in_band(double omega, const ModelParams& params) noexcept {
    return omega > params.band_bottom() && omega < params.band_top();
}

Momentum momentum_at_energy(double omega, const ModelParams& params) {
    if (!in_band(omega, params)) {
        throw DomainError("energy " + std::to_string(omega) + " outside the open band");
    }
    return Momentum(std::acos((params.epsilon - omega) / (2.0 * params.j_hop)));
}

}  // namespace wqed
