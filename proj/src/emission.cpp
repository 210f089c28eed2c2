#include "wqed/emission.hpp"

#include "wqed/errors.hpp"
#include "wqed/parallel.hpp"
#include "wqed/scattering.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace wqed {

namespace {

using boost::math::quadrature::gauss_kronrod;

template <class F>
double integrate(F&& f, double a, double b, double tol, double& error) {
    double err = 0.0;
    const double value = gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err);
    error += err;
    return value;
}

}  // namespace

cplx c_k(Momentum k, const ModelParams& params) {
    const double v = group_velocity(k, params);
    const cplx iv{0.0, v};
    const cplx detuning = dispersion(k, params) - params.delta_eff();
    const double g2 = params.g * params.g;
    return iv * params.g / (iv * detuning + g2);
}

ContinuumMoments continuum_moments(const ModelParams& params, double tol) {
    validate(params);
    if (params.lossy()) throw ParameterError("continuum moments require lossless parameters");
    if (params.g == 0.0) throw ParameterError("continuum moments require g > 0");

    // Even in k, so integrate over (0, pi) and divide by pi instead of 2 pi.
    std::vector<double> breaks{0.0};
    if (in_band(params.delta, params)) {
        const double k_res = momentum_at_energy(params.delta, params).value();
        // Lorentzian half width in k is about g^2 / v^2.
        const double v = group_velocity(Momentum(k_res), params);
        const double width = params.g * params.g / (v * v);
        for (double s : {-8.0, 0.0, 8.0}) {
            const double b = k_res + s * width;
            if (b > breaks.back() && b < pi) breaks.push_back(b);
        }
    }
    breaks.push_back(pi);

    auto weight = [&](double k) { return std::norm(c_k(Momentum(k), params)); };
    // Shifted below the band so the integrand is positive and the relative
    // tolerance stays meaningful when the energy moment vanishes.
    const double shift = params.band_bottom() - params.j_hop;
    auto energy = [&](double k) {
        const Momentum m(k);
        return (dispersion(m, params) - shift) * std::norm(c_k(m, params));
    };

    ContinuumMoments out;
    const double rel = tol * 1e-2;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        out.weight += integrate(weight, breaks[i], breaks[i + 1], rel, out.weight_error);
        out.energy += integrate(energy, breaks[i], breaks[i + 1], rel, out.energy_error);
    }
    out.weight /= pi;
    out.energy = out.energy / pi + shift * out.weight;
    out.weight_error /= pi;
    out.energy_error /= pi;
    return out;
}

DecayCoefficients coefficients(const ModelParams& params) {
    DecayCoefficients c;
    c.params = validate(params);
    c.bound = bound_states(params);
    c.c_plus = c.bound.upper.c_overlap;
    c.c_minus = c.bound.lower.c_overlap;
    c.p_lig = c.bound.upper.weight() + c.bound.lower.weight();
    c.p_emission = 1.0 - c.p_lig;
    c.continuum = continuum_moments(params);
    c.completeness = c.continuum.weight + c.p_lig;
    if (std::abs(c.completeness - 1.0) > kCompletenessTol) {
        throw NumericalError("decomposition incomplete: weights sum to " +
                             std::to_string(c.completeness));
    }
    return c;
}

double mean_emitted_energy(const DecayCoefficients& coeffs, const ModelParams& params) {
    if (!(coeffs.p_emission > 0.0)) {
        throw DomainError("no emitted photon: P_emission = 0");
    }
    const double bound_energy = coeffs.bound.upper.weight() * coeffs.bound.upper.omega +
                                coeffs.bound.lower.weight() * coeffs.bound.lower.omega;
    return (params.delta - bound_energy) / coeffs.p_emission;
}

double mean_emitted_energy_quadrature(const DecayCoefficients& coeffs) {
    if (!(coeffs.p_emission > 0.0)) {
        throw DomainError("no emitted photon: P_emission = 0");
    }
    return coeffs.continuum.energy / coeffs.p_emission;
}

double reconstructed_energy(const DecayCoefficients& coeffs) {
    return coeffs.continuum.energy + coeffs.bound.upper.weight() * coeffs.bound.upper.omega +
           coeffs.bound.lower.weight() * coeffs.bound.lower.omega;
}

std::vector<EmissionProbabilityRow> emission_probability_sweep(const ModelParams& base,
                                                               std::span<const double> delta_list,
                                                               std::span<const double> g_grid) {
    validate(base);
    std::vector<EmissionProbabilityRow> rows(delta_list.size() * g_grid.size());
    parallel_for(rows.size(), [&](std::size_t idx) {
        ModelParams p = base;
        p.delta = delta_list[idx / g_grid.size()];
        p.g = g_grid[idx % g_grid.size()];
        const auto pair = bound_states(p);
        rows[idx] = {p.delta, p.g, 1.0 - pair.lower.weight() - pair.upper.weight()};
    });
    return rows;
}

EmissionSpectrum spectrum(const ModelParams& params, bool normalize_max, std::size_t n_interior) {
    const auto coeffs = coefficients(params);
    EmissionSpectrum s;
    s.omega_ph = mean_emitted_energy(coeffs, params);
    s.k = momentum_grid_with_edges(n_interior);
    s.omega.reserve(s.k.size());
    s.weight.reserve(s.k.size());
    for (double k : s.k) {
        const Momentum m(k);
        s.omega.push_back(dispersion(m, params));
        s.weight.push_back(std::norm(c_k(m, params)));
    }
    if (normalize_max) {
        const double peak = *std::max_element(s.weight.begin(), s.weight.end());
        if (peak > 0.0) {
            for (double& w : s.weight) w /= peak;
        }
        s.normalized = true;
    }
    return s;
}

}  // namespace wqed
