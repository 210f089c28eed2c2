// scattering.hpp — single-photon transmission/reflection off the impurity

#pragma once

#include "wqed/model.hpp"

#include <span>
#include <vector>

namespace wqed {

struct ScatteringAmplitude {
    Momentum k;
    cplx t;        // transmission
    cplx r;        // reflection, always t - 1
    cplx d;        // exciton amplitude of the scattering state
    double big_r;  // |r|^2
};

// Amplitudes of the plane-wave scattering state at momentum k. An exciton
// loss rate enters through the complex delta; cavity losses are rejected.
// Throws DomainError when g = 0 and omega_k = delta (d undefined).
ScatteringAmplitude amplitudes(Momentum k, const ModelParams& params);

struct ReflectionMap {
    std::vector<double> deltas;
    std::vector<double> ks;
    std::vector<double> big_r;  // row-major, deltas.size() x ks.size()

    double at(std::size_t i_delta, std::size_t i_k) const { return big_r[i_delta * ks.size() + i_k]; }
};

// R_k over a (delta, k) grid; all other parameters taken from base.
ReflectionMap reflection_map(std::span<const double> delta_grid, std::span<const double> k_grid,
                             const ModelParams& base);

// n momenta strictly inside (0, pi) with the band edges 0 and pi appended
// at the ends, the sampling used for reflection and spectrum tables.
std::vector<double> momentum_grid_with_edges(std::size_t n_interior);

}  // namespace wqed
