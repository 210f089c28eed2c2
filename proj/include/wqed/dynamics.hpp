// dynamics.hpp — time evolution of the exciton amplitude after it is
// excited at t = 0
//
// c_e(t) = c_e^s(t) + c_e^b(t). The scattering part is
//   c_e^s(t) = e^{-i eps t} (4 g^2 / pi J^2) int_{-1}^{1} F(y) e^{2 i y J t} dy,
//   F(y) = sqrt(1-y^2) / [4 (1-y^2) ((delta-eps)/J + 2y)^2 + (g/J)^4],
// and the bound part is sum over both bound states of |c|^2 e^{-i w t}.
// Losses replace delta and eps by their complex effective values.

#pragma once

#include "wqed/bound_states.hpp"
#include "wqed/model.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace wqed {

// F(y) for y in [-1, 1]; complex detuning when `losses` is set.
cplx kernel(double y, const ModelParams& params, bool losses);

enum class Quantity { c_e, c_e_s, c_e_b, p_e, p_e_s, p_e_b };

std::string to_string(Quantity q);
bool is_probability(Quantity q);

struct TimeSeries {
    Quantity label{Quantity::c_e};
    ModelParams params;
    std::vector<double> times;
    std::vector<cplx> values;  // probabilities are stored with zero imaginary part
};

struct QuadratureResult {
    cplx value;
    double error_estimate{0.0};
    std::size_t nodes{0};
};

// Evaluates c_e^s(t). The substitution y = -cos(theta) turns the kernel
// integral into an integral of a smooth 2pi-periodic function, which the
// trapezoidal rule integrates with exponential accuracy. The node count is
// chosen from the distance of the integrand's poles to the real axis and
// from the oscillation 2Jt, then verified against the half-resolution sum.
// Thread-safe; node tables are cached per resolution.
class ScatteringIntegrator {
public:
    explicit ScatteringIntegrator(const ModelParams& params, double tol = 1e-10);

    cplx operator()(double t) const { return evaluate(t).value; }
    QuadratureResult evaluate(double t) const;

    const ModelParams& params() const noexcept { return params_; }
    double tolerance() const noexcept { return tol_; }
    // Distance of the nearest integrand singularity from the real theta axis.
    double strip_width() const noexcept { return strip_; }

private:
    struct Level {
        std::size_t intervals;
        std::vector<double> cos_theta;
        std::vector<cplx> weight;
    };

    std::shared_ptr<const Level> level(std::size_t intervals) const;
    std::size_t initial_intervals(double z) const;

    ModelParams params_;
    double tol_;
    cplx a_;
    double b_;
    double strip_;
    mutable std::mutex mutex_;
    mutable std::map<std::size_t, std::shared_ptr<const Level>> levels_;
};

cplx c_e_scattering(double t, const ModelParams& params, double tol = 1e-10);

// Lossless only; the bound part under losses is not supported.
cplx c_e_bound(double t, const ModelParams& params);

// Poles of the exciton resolvent on the physical sheet (|eta| < 1). For
// lossless parameters these are the bound-state energies with residues
// |c_+-|^2; with losses both move into the lower half plane.
struct ResolventPole {
    Branch branch{Branch::lower};
    cplx eta;
    cplx energy;
    cplx residue;
};

std::vector<ResolventPole> resolvent_poles(const ModelParams& params);

// Full c_e(t): scattering integral plus the discrete resolvent poles. Used
// for cross-checks against the finite-chain evolution, with or without losses.
class ExcitonPropagator {
public:
    explicit ExcitonPropagator(const ModelParams& params, double tol = 1e-10);

    cplx scattering(double t) const { return integrator_(t); }
    cplx discrete(double t) const;
    cplx operator()(double t) const { return scattering(t) + discrete(t); }

private:
    ScatteringIntegrator integrator_;
    std::vector<ResolventPole> poles_;
};

struct ExponentialFit {
    double rate{0.0};  // 1/tau
    double tau{0.0};
    double phi{0.0};   // oscillation frequency of the amplitude
    bool monotone{true};
    std::size_t points{0};
};

// Least-squares line through log|c| and the unwrapped phase on [t_lo, t_hi].
ExponentialFit exponential_fit(const TimeSeries& series, double t_lo, double t_hi);

struct DecayAnalysis {
    cplx y_p;          // pole of F in the upper half plane
    cplx a_p;          // residue of F at y_p
    double tau0{0.0};
    double phi{0.0};
    double delta_phi{0.0};  // Lamb shift phi - delta
    double tau0_fgr{0.0};
    double y_star_minus{0.0};
    double y_star_plus{0.0};
    double dy_minus{0.0};
    double dy_plus{0.0};
    double tau1_minus{0.0};
    double tau1_plus{0.0};
    cplx a_minus;
    cplx a_plus;
    bool ill_conditioned{false};  // pole within a few widths of a band edge
};

// Lossless or exciton-lossy parameters with delta inside the band.
DecayAnalysis pole_analysis(const ModelParams& params);

struct FgrEstimate {
    double tau0{0.0};
    double phi{0.0};
};

FgrEstimate fgr(const ModelParams& params);

struct TailPrediction {
    cplx exponential;   // single-pole term
    cplx intermediate;  // t^{-1/2} edge-peak term
    cplx asymptotic;    // t^{-3/2} Bessel term
};

TailPrediction tail_prediction(double t, const ModelParams& params, const DecayAnalysis& analysis);

struct DynamicsBundle {
    TimeSeries c_e_s;
    TimeSeries p_e;    // empty with losses
    TimeSeries p_e_s;
    TimeSeries p_e_b;  // empty with losses
};

DynamicsBundle full_dynamics(const ModelParams& params, std::span<const double> t_grid,
                             double tol = 1e-10);

struct EnvelopePoint {
    double t{0.0};
    double value{0.0};
};

// Period used for envelope extraction, pi/(2J): half the band-edge
// oscillation period.
double envelope_period(const ModelParams& params);

// Maximum of f over [anchor, anchor + period] for every anchor, located on a
// uniform sample and refined by a parabola through the top three samples.
std::vector<EnvelopePoint> oscillation_envelope(const std::function<double(double)>& f,
                                                std::span<const double> anchors, double period,
                                                int samples = 33);

// Least-squares slope of log(value) against log(t).
double loglog_slope(std::span<const EnvelopePoint> points);

}  // namespace wqed
