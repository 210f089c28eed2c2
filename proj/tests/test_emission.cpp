// test_emission.cpp — decomposition coefficients and emitted-photon observables
#include "wqed/emission.hpp"
#include "wqed/errors.hpp"
#include "wqed/grids.hpp"
#include "wqed/scattering.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace wqed;

namespace {

struct Moments {
    double weight{0.0};
    double energy{0.0};
};

// Periodic trapezoid over k in [-pi, pi) of |c_k|^2 and w_k |c_k|^2 with
// dk/2pi, written out from the closed form without the library.
Moments trapezoid_moments(const ModelParams& p, int n = 1 << 18) {
    Moments m;
    for (int i = 0; i < n; ++i) {
        const double k = -pi + 2.0 * pi * i / n;
        const double v = 2.0 * p.j_hop * std::sin(k);
        const double w = p.epsilon - 2.0 * p.j_hop * std::cos(k);
        const double g2 = p.g * p.g;
        const double c2 = v * v * g2 / (v * v * (w - p.delta) * (w - p.delta) + g2 * g2);
        m.weight += c2;
        m.energy += w * c2;
    }
    m.weight /= n;
    m.energy /= n;
    return m;
}

}  // namespace

TEST_CASE("completeness and energy conservation against an independent quadrature") {
    for (double a : {-1.5, -1.0, -0.5, 0.0}) {
        for (double g : {0.2, 0.5, 1.0, 2.0}) {
            CAPTURE(a);
            CAPTURE(g);
            ModelParams p{a, 0.0, 1.0, g};
            const auto co = coefficients(p);
            const auto ref = trapezoid_moments(p);
            CHECK(std::abs(co.continuum.weight - ref.weight) < 1e-10);
            CHECK(std::abs(co.continuum.energy - ref.energy) < 1e-10);
            CHECK(std::abs(ref.weight + co.p_lig - 1.0) < 1e-8);
            const double energy = ref.energy + co.c_plus * co.c_plus * co.bound.upper.omega +
                                  co.c_minus * co.c_minus * co.bound.lower.omega;
            CHECK(std::abs(energy - p.delta) < 1e-8);
            CHECK(std::abs(reconstructed_energy(co) - p.delta) < 1e-8);
            CHECK(std::abs(mean_emitted_energy(co, p) - mean_emitted_energy_quadrature(co)) < 1e-8);
            CHECK(co.p_emission > 0.0);
            CHECK(co.p_emission <= 1.0);
        }
    }
}

TEST_CASE("symmetry point: emitted energy equals the exciton energy") {
    for (double g : {0.2, 0.5, 1.0, 2.0}) {
        ModelParams p{0.0, 0.0, 1.0, g};
        const auto co = coefficients(p);
        CHECK(std::abs(mean_emitted_energy(co, p) - p.delta) < 1e-10);
        const double up = co.c_plus * co.c_plus * (co.bound.upper.omega - p.delta);
        const double down = co.c_minus * co.c_minus * (p.delta - co.bound.lower.omega);
        CHECK(std::abs(up - down) < 1e-14);
    }
}

TEST_CASE("emitted energy is pulled toward the band centre") {
    ModelParams p{-1.0, 0.0, 1.0, 0.5};
    CHECK(mean_emitted_energy(coefficients(p), p) > p.delta);
    double previous = 1e9;
    for (double g : {1.0, 3.0, 10.0, 30.0}) {
        p.g = g;
        const double shift = std::abs(mean_emitted_energy(coefficients(p), p) - p.epsilon);
        CHECK(shift < previous);
        previous = shift;
    }
    CHECK(previous < 0.05);
}

TEST_CASE("c_k is the conjugate of the scattering exciton amplitude") {
    ModelParams p{0.3, 0.0, 1.0, 0.4};
    for (double k : {-2.5, -0.4, 0.1, 1.3, 2.9}) {
        const cplx ck = c_k(Momentum(k), p);
        CHECK(std::abs(ck - std::conj(amplitudes(Momentum(k), p).d)) < 1e-15);
        CHECK(std::norm(ck) == doctest::Approx(std::norm(c_k(Momentum(-k), p))).epsilon(1e-13));
        CHECK(std::abs(c_k(Momentum(-k), p) - std::conj(ck)) < 1e-15);
    }
}

TEST_CASE("weak coupling emits almost surely") {
    const auto co = coefficients(ModelParams{0.0, 0.0, 1.0, 0.02});
    CHECK(co.p_emission > 1.0 - 1e-5);
    CHECK_THROWS_AS(coefficients(ModelParams{0.0, 0.0, 1.0, 0.0}), ParameterError);
}

TEST_CASE("emission spectrum shape") {
    ModelParams p{-0.6, 0.0, 1.0, 0.2};
    const auto s = spectrum(p, true, 4001);
    CHECK(s.k.size() == 4003);
    CHECK(s.normalized);
    const auto top = std::max_element(s.weight.begin(), s.weight.end()) - s.weight.begin();
    CHECK(s.weight[top] == doctest::Approx(1.0));
    const double step = s.k[2] - s.k[1];
    CHECK(std::abs(s.k[top] - momentum_at_energy(p.delta, p).value()) <= step);
    for (double w : s.weight) CHECK(w >= 0.0);

    // Strong coupling near the band edge: the maximum moves toward the centre.
    ModelParams edge{-1.8, 0.0, 1.0, 0.5};
    const auto e = spectrum(edge, false, 4001);
    const auto peak = std::max_element(e.weight.begin(), e.weight.end()) - e.weight.begin();
    CHECK(e.omega[peak] > edge.delta + 0.05);
    CHECK(e.omega_ph > edge.delta);
}

TEST_CASE("emission probability sweep ordering") {
    const std::vector<double> deltas{-1.5, -1.0, -0.5, 0.0};
    const auto g = linear_grid(0.05, 3.0, 30);
    const auto rows = emission_probability_sweep(ModelParams{}, deltas, g);
    REQUIRE(rows.size() == deltas.size() * g.size());
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        for (std::size_t i = 1; i < g.size(); ++i) {
            CHECK(rows[d * g.size() + i].p_emission < rows[d * g.size() + i - 1].p_emission);
        }
        CHECK(rows[d * g.size()].p_emission > 0.99);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(rows[i].p_emission < rows[3 * g.size() + i].p_emission);
    }
}
