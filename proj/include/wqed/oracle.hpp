// oracle.hpp — exact single-excitation evolution on a finite open chain
//
// The chain has N (odd) photon sites with the impurity coupled to the centre
// site. The (N+1)x(N+1) Hamiltonian is diagonalized once; evolution is the
// spectral sum  psi(t) = sum_m e^{-i l_m t} alpha_m v_m. Losses make the
// diagonal complex and switch to a general eigensolver.

#pragma once

#include "wqed/dynamics.hpp"
#include "wqed/field.hpp"
#include "wqed/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wqed {

inline constexpr double kBoundarySafety = 0.9;
inline constexpr long kMinChainSites = 51;

struct FiniteChain {
    ModelParams params;
    long n_sites{0};
    long center{0};          // photon index of site x = 0
    double t_boundary{0.0};  // kBoundarySafety * N / (4J)
    bool lossy{false};
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd eigenvectors;  // columns, right eigenvectors
    Eigen::VectorXcd alpha;         // expansion of the initial exciton state
    double residual{0.0};           // max_m |H v_m - l_m v_m|

    long exciton_index() const noexcept { return n_sites; }
    // Eigenvalues whose real part lies outside [eps - 2J, eps + 2J], ascending.
    std::vector<double> out_of_band() const;
    // |v_exciton|^2 of the eigenvectors returned by out_of_band().
    std::vector<double> out_of_band_exciton_weight() const;
};

// Throws ParameterError unless N is odd and >= kMinChainSites, and
// NumericalError if the eigendecomposition residual exceeds 1e-10 J.
FiniteChain build(const ModelParams& params, long n_sites);

struct OracleState {
    double t{0.0};
    cplx c_e;
    std::vector<cplx> phi;  // phi[i] at x = i - center
    bool beyond_boundary{false};

    cplx at(long x, long center) const { return phi[static_cast<std::size_t>(x + center)]; }
    double norm() const;
};

OracleState evolve(const FiniteChain& chain, double t);
cplx exciton_amplitude(const FiniteChain& chain, double t);

struct Comparison {
    double max_deviation{0.0};           // over points with t <= t_boundary
    double max_deviation_all{0.0};       // including later points
    std::size_t points{0};
    std::size_t beyond_boundary{0};      // points flagged as contaminated
};

// Sup-norm deviation of |c_e(t)|; the series may hold c_e or any probability
// label (compared as |c_e|^2 then).
Comparison compare(const FiniteChain& chain, const TimeSeries& series);

// Site-wise sup-norm deviation of |phi_x| on the profile window.
Comparison compare_field(const FiniteChain& chain, const FieldProfile& profile);

}  // namespace wqed
