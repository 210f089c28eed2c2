// emission.hpp — decomposition of the initially excited impurity into
// scattering and bound eigenstates, and the observables of the emitted photon

#pragma once

#include "wqed/bound_states.hpp"
#include "wqed/model.hpp"

#include <span>
#include <vector>

namespace wqed {

// In-band overlap c_k = d_k^* = i v_k g / (i v_k (omega_k - delta) + g^2).
cplx c_k(Momentum k, const ModelParams& params);

// Integrals of |c_k|^2 and omega_k |c_k|^2 over the band, dk/2pi measure.
struct ContinuumMoments {
    double weight{0.0};
    double energy{0.0};
    double weight_error{0.0};
    double energy_error{0.0};
};

// Adaptive Gauss-Kronrod with the interval split at the resonance k_delta.
ContinuumMoments continuum_moments(const ModelParams& params, double tol = 1e-10);

struct DecayCoefficients {
    ModelParams params;
    BoundPair bound;
    double c_plus{0.0};   // overlap with the upper bound state
    double c_minus{0.0};  // overlap with the lower bound state
    double p_lig{0.0};    // |c+|^2 + |c-|^2
    double p_emission{0.0};
    ContinuumMoments continuum;
    double completeness{0.0};  // continuum weight + p_lig

    cplx c_k(Momentum k) const { return wqed::c_k(k, params); }
};

// Throws NumericalError if completeness misses 1 by more than
// kCompletenessTol.
inline constexpr double kCompletenessTol = 1e-8;
DecayCoefficients coefficients(const ModelParams& params);

// Mean energy of the propagating photon from energy conservation:
// (delta - |c+|^2 w+ - |c-|^2 w-) / (1 - P_lig).
double mean_emitted_energy(const DecayCoefficients& coeffs, const ModelParams& params);

// Same quantity from the direct quadrature of omega_k |c_k|^2.
double mean_emitted_energy_quadrature(const DecayCoefficients& coeffs);

// Total energy <H> reconstructed from the decomposition; equals delta.
double reconstructed_energy(const DecayCoefficients& coeffs);

struct EmissionProbabilityRow {
    double delta{0.0};
    double g{0.0};
    double p_emission{0.0};
};

std::vector<EmissionProbabilityRow> emission_probability_sweep(const ModelParams& base,
                                                               std::span<const double> delta_list,
                                                               std::span<const double> g_grid);

struct EmissionSpectrum {
    double omega_ph{0.0};
    std::vector<double> k;
    std::vector<double> omega;
    std::vector<double> weight;  // |c_k|^2, or |c_k|^2 / max if normalized
    bool normalized{false};
};

// |c_k|^2 sampled on k in [0, pi] (n_interior points plus both edges).
EmissionSpectrum spectrum(const ModelParams& params, bool normalize_max,
                          std::size_t n_interior = 2001);

}  // namespace wqed
