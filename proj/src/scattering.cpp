#include "wqed/scattering.hpp"

#include "wqed/errors.hpp"
#include "wqed/parallel.hpp"

#include <cmath>

namespace wqed {

ScatteringAmplitude amplitudes(Momentum k, const ModelParams& params) {
    validate(params);
    if (params.gamma_c > 0.0) {
        throw ParameterError("scattering amplitudes are not defined with cavity losses");
    }
    const double omega = dispersion(k, params);
    const double v = group_velocity(k, params);
    const cplx detuning = omega - params.delta_eff();
    const cplx iv{0.0, v};

    ScatteringAmplitude out{k, {}, {}, {}, 0.0};
    if (params.g == 0.0) {
        if (std::abs(detuning) <= 1e-12 * params.j_hop) {
            throw DomainError("degenerate point: g = 0 and omega_k = delta leave d_k undefined");
        }
        out.t = 1.0;
        out.d = 0.0;
    } else {
        const double g2 = params.g * params.g;
        const cplx denom = iv * detuning - g2;
        out.t = iv * detuning / denom;
        // Resonance-safe form of g t / (omega - delta).
        out.d = iv * params.g / denom;
    }
    out.r = out.t - 1.0;
    out.big_r = std::norm(out.r);
    return out;
}

ReflectionMap reflection_map(std::span<const double> delta_grid, std::span<const double> k_grid,
                             const ModelParams& base) {
    validate(base);
    ReflectionMap map;
    map.deltas.assign(delta_grid.begin(), delta_grid.end());
    map.ks.assign(k_grid.begin(), k_grid.end());
    map.big_r.resize(map.deltas.size() * map.ks.size());
    for (double x : map.deltas) {
        if (!std::isfinite(x)) throw ParameterError("non-finite delta in reflection grid");
    }
    for (double x : map.ks) {
        if (!std::isfinite(x)) throw ParameterError("non-finite k in reflection grid");
    }
    parallel_for(map.deltas.size(), [&](std::size_t i) {
        ModelParams p = base;
        p.delta = map.deltas[i];
        for (std::size_t j = 0; j < map.ks.size(); ++j) {
            const Momentum k(map.ks[j]);
            double r;
            if (p.g > 0.0 && (k.value() == 0.0 || k.value() == -pi)) {
                r = 1.0;  // band edge, v_k = 0
            } else {
                r = amplitudes(k, p).big_r;
            }
            map.big_r[i * map.ks.size() + j] = r;
        }
    });
    return map;
}

std::vector<double> momentum_grid_with_edges(std::size_t n_interior) {
    std::vector<double> ks;
    ks.reserve(n_interior + 2);
    ks.push_back(0.0);
    for (std::size_t i = 1; i <= n_interior; ++i) {
        ks.push_back(pi * static_cast<double>(i) / static_cast<double>(n_interior + 1));
    }
    ks.push_back(pi);
    return ks;
}

}  // namespace wqed
