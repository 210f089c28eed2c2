// bound_states.hpp — the two localized single-excitation eigenstates
//
// A bound state has photon amplitudes N * eta^|x| and exciton amplitude
// N * d, where eta = exp(-kappa) is a root of
//   eta^4 + a eta^3 + b^2 eta^2 - a eta - 1 = 0,  a = (delta-epsilon)/J, b = g/J.
// The lower state (0 < eta < 1) sits below the band, the upper state
// (-1 < eta < 0, Im kappa = pi) above it.

#pragma once

#include "wqed/model.hpp"

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wqed {

enum class Branch { lower, upper };

std::string to_string(Branch b);

struct BoundState {
    Branch branch{Branch::lower};
    double eta{0.0};
    cplx kappa{};        // -log(eta): -log|eta| plus i*pi when eta < 0
    double omega{0.0};   // epsilon - J (eta + 1/eta)
    double d_amp{0.0};   // g / (omega - delta)
    double norm{0.0};    // N, real positive
    double c_overlap{0.0};  // (N d)^*, the overlap with the bare exciton

    // Localization length 1/|kappa| in lattice sites.
    double localization_length() const;
    // |c|^2, the weight of this state in the initially excited exciton.
    double weight() const noexcept { return c_overlap * c_overlap; }
};

struct BoundPair {
    BoundState lower;
    BoundState upper;
};

// Tolerances defining a "real, localized" root. The lower one sets the
// smallest usable coupling: as g -> 0 the physical roots approach +-1.
inline constexpr double kRealRootTol = 1e-9;
inline constexpr double kLocalizationMargin = 1e-12;

// Roots of the quartic for (complex) detuning a and coupling b = g/J, via
// companion-matrix eigenvalues followed by Newton polishing.
std::array<cplx, 4> quartic_roots(cplx a, double b);

// Roots for lossless parameters, using the real detuning.
std::array<cplx, 4> quartic_roots(const ModelParams& params);

// Picks (eta_lower, eta_upper) out of the four roots. Throws
// NumericalError with the offending roots when the filter does not
// leave exactly one root per branch.
std::pair<double, double> select_physical(std::span<const cplx> roots);

// Throws ParameterError for g = 0 or lossy parameters.
BoundState bound_state(const ModelParams& params, Branch branch);
BoundPair bound_states(const ModelParams& params);

struct BoundEnergyRow {
    double g{0.0};
    double omega_minus{0.0};
    double omega_plus{0.0};
};

// One row per coupling of an ascending grid, other parameters from base.
std::vector<BoundEnergyRow> sweep_bound_energies(const ModelParams& base,
                                                 std::span<const double> g_grid);

}  // namespace wqed
