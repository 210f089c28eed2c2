// test_bound_states.cpp — quartic roots, bound-state descriptors and sweeps
#include "wqed/bound_states.hpp"
#include "wqed/errors.hpp"
#include "wqed/grids.hpp"
#include "wqed/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace wqed;

namespace {

cplx quartic(cplx eta, double a, double b) {
    return std::pow(eta, 4) + a * std::pow(eta, 3) + b * b * eta * eta - a * eta - 1.0;
}

// Max |H psi - omega psi| over |x| <= inner for the bound state truncated at
// |x| <= outer.
double eigen_residual(const BoundState& s, const ModelParams& p, long outer, long inner) {
    auto phot = [&](long x) { return std::abs(x) > outer ? 0.0 : s.norm * std::pow(s.eta, std::abs(x)); };
    const double exc = s.norm * s.d_amp;
    double worst = std::abs(p.delta * exc + p.g * phot(0) - s.omega * exc);
    for (long x = -inner; x <= inner; ++x) {
        double h = p.epsilon * phot(x) - p.j_hop * (phot(x - 1) + phot(x + 1));
        if (x == 0) h += p.g * exc;
        worst = std::max(worst, std::abs(h - s.omega * phot(x)));
    }
    return worst;
}

}  // namespace

TEST_CASE("closed-form reference at delta = epsilon, g = J") {
    ModelParams p{0.0, 0.0, 1.0, 1.0};
    const double eta_ref = std::sqrt((std::sqrt(5.0) - 1.0) / 2.0);
    const auto roots = quartic_roots(p);
    for (cplx r : roots) CHECK(std::abs(quartic(r, 0.0, 1.0)) < 1e-10);
    const auto [lo, up] = select_physical(roots);
    CHECK(std::abs(lo - eta_ref) < 1e-12);
    CHECK(std::abs(up + eta_ref) < 1e-12);

    const auto pair = bound_states(p);
    const double w_ref = eta_ref + 1.0 / eta_ref;
    CHECK(std::abs(pair.lower.omega + w_ref) < 1e-12);
    CHECK(std::abs(pair.upper.omega - w_ref) < 1e-12);
    CHECK(std::abs(pair.lower.omega + 2.0581710272714924) < 1e-9);
    CHECK(std::abs(pair.lower.weight() - pair.upper.weight()) < 1e-14);
    // The other two roots form a purely imaginary pair.
    int imaginary = 0;
    for (cplx r : roots) imaginary += std::abs(r.real()) < 1e-12 && std::abs(r.imag()) > 0.5;
    CHECK(imaginary == 2);
}

TEST_CASE("bound-state invariants over a parameter grid") {
    for (double a : {-1.5, -1.0, -0.5, 0.0, 0.7}) {
        for (double g : {0.05, 0.2, 0.5, 1.0, 2.5}) {
            ModelParams p{a, 0.0, 1.0, g};
            const auto pair = bound_states(p);
            for (const BoundState* s : {&pair.lower, &pair.upper}) {
                CAPTURE(a);
                CAPTURE(g);
                CHECK(std::abs(s->eta) < 1.0);
                CHECK(s->kappa.real() > 0.0);
                const double expected_im = s->branch == Branch::lower ? 0.0 : pi;
                CHECK(std::abs(s->kappa.imag() - expected_im) < 1e-15);
                const cplx e = std::exp(s->kappa);
                CHECK(std::abs(p.epsilon - p.j_hop * (1.0 / e + e).real() - s->omega) < 1e-10);
                CHECK(std::abs(s->d_amp - g / (s->omega - p.delta)) < 1e-14);
                const double e2 = s->eta * s->eta;
                CHECK(std::abs(s->norm * s->norm * ((1 + e2) / (1 - e2) + s->d_amp * s->d_amp) - 1.0) < 1e-12);
                CHECK(s->norm > 0.0);
                const long outer = static_cast<long>(40.0 / s->kappa.real());
                CHECK(eigen_residual(*s, p, outer, outer / 2) < 1e-8);
            }
            CHECK(pair.lower.omega < p.band_bottom());
            CHECK(pair.upper.omega > p.band_top());
        }
    }
}

TEST_CASE("asymmetric detuning gives asymmetric roots") {
    ModelParams p{-1.0, 0.0, 1.0, 0.5};
    const auto [lo, up] = select_physical(quartic_roots(p));
    CHECK(lo > 0.0);
    CHECK(lo < 1.0);
    CHECK(up < 0.0);
    CHECK(up > -1.0);
    CHECK(std::abs(std::abs(lo) - std::abs(up)) > 1e-3);
}

TEST_CASE("weak coupling pushes roots and energies to the band edges") {
    ModelParams p{0.0, 0.0, 1.0, 1e-3};
    for (cplx r : quartic_roots(p)) CHECK(std::abs(std::abs(r) - 1.0) < 1e-5);
    const auto pair = bound_states(p);
    CHECK(std::abs(pair.lower.omega + 2.0) < 1e-9);
    CHECK(std::abs(pair.upper.omega - 2.0) < 1e-9);
}

TEST_CASE("selection failures and rejected inputs") {
    const std::vector<cplx> complex_only{{0.5, 0.5}, {0.5, -0.5}, {-0.5, 0.5}, {-0.5, -0.5}};
    CHECK_THROWS_AS(select_physical(complex_only), NumericalError);
    const std::vector<cplx> outside{{1.5, 0.0}, {-1.5, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
    CHECK_THROWS_AS(select_physical(outside), NumericalError);

    CHECK_THROWS_WITH_AS(bound_states(ModelParams{0.0, 0.0, 1.0, 0.0}),
                         doctest::Contains("no bound states at zero coupling"), ParameterError);
    CHECK_THROWS_AS(bound_states(ModelParams{0.0, 0.0, 1.0, 0.2, 0.01, 0.0}), ParameterError);
    CHECK(bound_state(ModelParams{0.0, 0.0, 1.0, 1.0}, Branch::upper).branch == Branch::upper);
}

TEST_CASE("energy sweep is monotone and reproduces the limits") {
    const auto g = linear_grid(0.01, 3.0, 100);
    for (double a : {0.0, -1.0}) {
        const auto rows = sweep_bound_energies(ModelParams{a, 0.0, 1.0}, g);
        REQUIRE(rows.size() == 100);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].omega_minus < rows[i - 1].omega_minus);
            CHECK(rows[i].omega_plus > rows[i - 1].omega_plus);
        }
        CHECK(std::abs(rows.front().omega_minus + 2.0) < 1e-3);
        CHECK(std::abs(rows.front().omega_plus - 2.0) < 1e-3);
        if (a == 0.0) {
            for (const auto& r : rows) CHECK(std::abs(r.omega_minus + r.omega_plus) < 1e-12);
        } else {
            // The lower state is farther from delta and recedes faster.
            const auto& first = rows.front();
            const auto& last = rows.back();
            const double lower_move = std::abs(last.omega_minus - a) - std::abs(first.omega_minus - a);
            const double upper_move = std::abs(last.omega_plus - a) - std::abs(first.omega_plus - a);
            CHECK(lower_move > upper_move);
        }
    }
    const std::vector<double> descending{1.0, 0.5};
    CHECK_THROWS_AS(sweep_bound_energies(ModelParams{}, descending), ParameterError);
}

TEST_CASE("finite chain reproduces the bound states") {
    for (double a : {0.0, -0.5}) {
        ModelParams p{a, 0.0, 1.0, 1.0};
        const auto pair = bound_states(p);
        const auto chain = build(p, 2001);
        const auto out = chain.out_of_band();
        REQUIRE(out.size() == 2);
        CHECK(std::abs(out[0] - pair.lower.omega) < 1e-8);
        CHECK(std::abs(out[1] - pair.upper.omega) < 1e-8);
        const auto w = chain.out_of_band_exciton_weight();
        CHECK(std::abs(w[0] - pair.lower.weight()) < 1e-6);
        CHECK(std::abs(w[1] - pair.upper.weight()) < 1e-6);
    }
}
