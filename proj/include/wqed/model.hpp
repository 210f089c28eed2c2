// model.hpp — Hamiltonian parameters, tight-binding dispersion, momentum helpers
//
// The photonic medium is an infinite chain of cavities with on-site energy
// epsilon and hopping J; the impurity (exciton) of energy delta couples to
// site 0 with strength g. Loss rates enter only through the complex
// effective energies delta - i*gamma_e/2 and epsilon - i*gamma_c/2.

#pragma once

#include <complex>
#include <numbers>

namespace wqed {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

struct ModelParams {
    double delta{0.0};    // exciton energy
    double epsilon{0.0};  // on-site photon energy
    double j_hop{1.0};    // hopping J > 0
    double g{0.2};        // exciton-cavity coupling
    double gamma_e{0.0};  // exciton loss rate
    double gamma_c{0.0};  // cavity loss rate

    bool lossy() const noexcept { return gamma_e > 0.0 || gamma_c > 0.0; }

    cplx delta_eff() const noexcept { return {delta, -0.5 * gamma_e}; }
    cplx epsilon_eff() const noexcept { return {epsilon, -0.5 * gamma_c}; }

    // (delta - epsilon)/J, the detuning in band units.
    double detuning() const noexcept { return (delta - epsilon) / j_hop; }
    // Complex detuning (delta~ - epsilon~)/J.
    cplx detuning_eff() const noexcept { return (delta_eff() - epsilon_eff()) / j_hop; }
    // g/J
    double coupling() const noexcept { return g / j_hop; }

    double band_bottom() const noexcept { return epsilon - 2.0 * j_hop; }
    double band_top() const noexcept { return epsilon + 2.0 * j_hop; }

    ModelParams lossless() const noexcept {
        ModelParams p = *this;
        p.gamma_e = 0.0;
        p.gamma_c = 0.0;
        return p;
    }
};

// Dimensionless lattice momentum, always stored wrapped into [-pi, pi).
class Momentum {
public:
    constexpr Momentum() = default;
    explicit Momentum(double k) noexcept;

    double value() const noexcept { return k_; }
    Momentum operator-() const noexcept { return Momentum(-k_); }

private:
    double k_{0.0};
};

// Returns params unchanged or throws ParameterError naming the violated invariant.
ModelParams validate(const ModelParams& params);

// omega_k = epsilon - 2J cos k
double dispersion(Momentum k, const ModelParams& params) noexcept;

// v_k = 2J sin k
double group_velocity(Momentum k, const ModelParams& params) noexcept;

// The unique k in (0, pi) with omega_k = omega. Throws DomainError unless
// omega lies strictly inside the band; callers wanting -k negate the result.
Momentum momentum_at_energy(double omega, const ModelParams& params);

// True when omega lies in the open band (epsilon - 2J, epsilon + 2J).
bool in_band(double omega, const ModelParams& params) noexcept;

}  // namespace wqed
