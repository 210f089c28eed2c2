// test_oracle.cpp — finite-chain exact diagonalization
#include "wqed/bound_states.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"
#include "wqed/grids.hpp"
#include "wqed/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace wqed;

TEST_CASE("decoupled chain has open-chain modes plus the bare exciton") {
    ModelParams p{0.37, 0.1, 1.0, 0.0};
    const long n = 101;
    const auto chain = build(p, n);
    std::vector<double> expected;
    for (long q = 1; q <= n; ++q) expected.push_back(0.1 - 2.0 * std::cos(q * pi / (n + 1)));
    expected.push_back(0.37);
    std::sort(expected.begin(), expected.end());
    std::vector<double> got;
    for (long m = 0; m <= n; ++m) got.push_back(chain.eigenvalues[m].real());
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-12);
}

TEST_CASE("spectrum is symmetric about epsilon at delta = epsilon") {
    const auto chain = build(ModelParams{0.4, 0.4, 1.0, 0.7}, 201);
    std::vector<double> e;
    for (long m = 0; m < chain.eigenvalues.size(); ++m) e.push_back(chain.eigenvalues[m].real() - 0.4);
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(std::abs(e[i] + e[e.size() - 1 - i]) < 1e-12);
    CHECK(chain.residual < 1e-10);
}

TEST_CASE("evolution is unitary and starts on the exciton") {
    ModelParams p{0.0, 0.0, 1.0, 0.2};
    const auto chain = build(p, 401);
    const auto s0 = evolve(chain, 0.0);
    CHECK(std::abs(s0.c_e - 1.0) < 1e-12);
    double photons = 0.0;
    for (const cplx& a : s0.phi) photons += std::norm(a);
    CHECK(photons < 1e-24);
    for (double t : {1.0, 17.3, 80.0, 500.0}) {
        const auto s = evolve(chain, t);
        CHECK(std::abs(s.norm() - 1.0) < 1e-12);
        CHECK(std::abs(s.c_e - exciton_amplitude(chain, t)) < 1e-13);
        CHECK(s.beyond_boundary == (t > chain.t_boundary));
    }
    CHECK(chain.t_boundary == doctest::Approx(0.9 * 401 / 4.0));
}

TEST_CASE("out-of-band eigenvalues converge to the bound-state energies") {
    ModelParams p{-0.5, 0.0, 1.0, 0.5};
    const auto pair = bound_states(p);
    const auto small = build(p, 501).out_of_band();
    const auto large = build(p, 2001).out_of_band();
    REQUIRE(small.size() == 2);
    REQUIRE(large.size() == 2);
    const double e_small = std::abs(small[0] - pair.lower.omega) + std::abs(small[1] - pair.upper.omega);
    const double e_large = std::abs(large[0] - pair.lower.omega) + std::abs(large[1] - pair.upper.omega);
    CHECK(e_large <= 0.5 * e_small + 1e-15);
    CHECK(e_large < 1e-8);
}

TEST_CASE("comparison against the analytic pipeline") {
    ModelParams p{0.0, 0.0, 1.0, 0.2};
    const auto chain = build(p, 1201);
    const ScatteringIntegrator integ(p);
    TimeSeries s;
    s.label = Quantity::c_e;
    s.params = p;
    s.times = linear_grid(0.0, 400.0, 81);
    for (double t : s.times) s.values.push_back(integ(t) + c_e_bound(t, p));
    const auto cmp = compare(chain, s);
    CHECK(cmp.max_deviation < 1e-6);
    CHECK(cmp.beyond_boundary > 0);
    CHECK(cmp.max_deviation_all >= cmp.max_deviation);

    const auto at50 = std::abs(exciton_amplitude(chain, 50.0));
    CHECK(std::abs(at50 - std::abs(integ(50.0) + c_e_bound(50.0, p))) < 1e-6);

    TimeSeries probs = s;
    probs.label = Quantity::p_e;
    for (auto& v : probs.values) v = std::norm(v);
    CHECK(compare(chain, probs).max_deviation < 1e-6);

    TimeSeries broken = s;
    broken.values.pop_back();
    CHECK_THROWS_AS(compare(chain, broken), ParameterError);
}

TEST_CASE("lossy chain decays") {
    ModelParams p{0.0, 0.0, 1.0, 0.2, 0.02, 0.0};
    const auto chain = build(p, 201);
    CHECK(chain.lossy);
    const auto s = evolve(chain, 20.0);
    CHECK(s.norm() < 1.0);
    // Only the exciton component is damped.
    CHECK(s.norm() > std::exp(-0.02 * 20.0));
}

TEST_CASE("chain length validation") {
    ModelParams p;
    CHECK_THROWS_AS(build(p, 100), ParameterError);
    CHECK_THROWS_AS(build(p, 49), ParameterError);
    CHECK_NOTHROW(build(p, 51));
}
