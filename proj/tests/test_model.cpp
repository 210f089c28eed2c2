// test_model.cpp — parameters, dispersion and momentum conversions
#include "wqed/errors.hpp"
#include "wqed/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wqed;

TEST_CASE("validate accepts headline parameters and rejects broken ones") {
    ModelParams p{0.0, 0.0, 1.0, 0.2};
    CHECK_NOTHROW(validate(p));

    ModelParams zero_j = p;
    zero_j.j_hop = 0.0;
    CHECK_THROWS_WITH_AS(validate(zero_j), doctest::Contains("zero bandwidth"), ParameterError);

    ModelParams neg_g = p;
    neg_g.g = -1.0;
    CHECK_THROWS_WITH_AS(validate(neg_g), doctest::Contains("negative coupling"), ParameterError);

    ModelParams neg_loss = p;
    neg_loss.gamma_c = -0.1;
    CHECK_THROWS_AS(validate(neg_loss), ParameterError);

    ModelParams nan = p;
    nan.delta = std::nan("");
    CHECK_THROWS_AS(validate(nan), ParameterError);
}

TEST_CASE("effective complex energies carry half the loss rates") {
    ModelParams p{0.3, -0.1, 1.0, 0.2, 0.04, 0.02};
    CHECK(p.lossy());
    CHECK(p.delta_eff() == cplx(0.3, -0.02));
    CHECK(p.epsilon_eff() == cplx(-0.1, -0.01));
    CHECK_FALSE(p.lossless().lossy());
}

TEST_CASE("momentum wraps into [-pi, pi)") {
    CHECK(Momentum(pi).value() == doctest::Approx(-pi));
    CHECK(Momentum(-pi).value() == -pi);
    CHECK(Momentum(3.0 * pi / 2.0).value() == doctest::Approx(-pi / 2.0));
    CHECK(Momentum(-5.0 * pi / 2.0).value() == doctest::Approx(-pi / 2.0));
    for (double k : {-100.0, -7.0, -3.2, 0.0, 3.2, 7.0, 1e4}) {
        const double w = Momentum(k).value();
        CHECK(w >= -pi);
        CHECK(w < pi);
        CHECK(std::cos(w) == doctest::Approx(std::cos(k)).epsilon(1e-10));
    }
    CHECK((-Momentum(0.5)).value() == -0.5);
}

TEST_CASE("dispersion and group velocity") {
    ModelParams p{0.0, 0.7, 1.3, 0.2};
    CHECK(dispersion(Momentum(0.0), p) == doctest::Approx(0.7 - 2.6));
    CHECK(dispersion(Momentum(pi / 2), p) == doctest::Approx(0.7));
    CHECK(dispersion(Momentum(pi), p) == doctest::Approx(0.7 + 2.6));
    CHECK(dispersion(Momentum(-pi), p) == doctest::Approx(0.7 + 2.6));
    CHECK(group_velocity(Momentum(pi / 2), p) == doctest::Approx(2.6));
    CHECK(group_velocity(Momentum(0.0), p) == 0.0);
    CHECK(group_velocity(Momentum(-pi / 2), p) == doctest::Approx(-2.6));

    double lo = 1e9, hi = -1e9;
    for (int i = 0; i <= 100000; ++i) {
        const Momentum k(-pi + 2.0 * pi * i / 100000.0);
        lo = std::min(lo, dispersion(k, p));
        hi = std::max(hi, dispersion(k, p));
        CHECK(dispersion(k, p) == dispersion(-k, p));
        if (k.value() != -pi) CHECK(group_velocity(k, p) == -group_velocity(-k, p));
    }
    CHECK(std::abs(lo - p.band_bottom()) < 1e-12);
    CHECK(std::abs(hi - p.band_top()) < 1e-12);
}

TEST_CASE("momentum_at_energy inverts the dispersion inside the open band") {
    ModelParams p{0.0, 0.0, 1.0, 0.2};
    CHECK(momentum_at_energy(0.0, p).value() == doctest::Approx(pi / 2));
    CHECK(momentum_at_energy(-1.0, p).value() == doctest::Approx(pi / 3));
    CHECK_THROWS_AS(momentum_at_energy(-2.0, p), DomainError);
    CHECK_THROWS_AS(momentum_at_energy(2.0, p), DomainError);
    CHECK_THROWS_AS(momentum_at_energy(5.0, p), DomainError);

    ModelParams q{0.0, 0.4, 0.8, 0.2};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(q.band_bottom(), q.band_top());
    for (int i = 0; i < 1000; ++i) {
        const double w = u(rng);
        if (!in_band(w, q)) continue;
        const Momentum k = momentum_at_energy(w, q);
        CHECK(k.value() > 0.0);
        CHECK(k.value() < pi);
        CHECK(std::abs(dispersion(k, q) - w) < 1e-12 * q.j_hop);
    }
}
