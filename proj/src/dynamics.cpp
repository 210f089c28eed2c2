#include "wqed/dynamics.hpp"

#include "wqed/errors.hpp"
#include "wqed/parallel.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace wqed {

namespace {

constexpr std::size_t kMinIntervals = 64;
constexpr std::size_t kMaxIntervals = std::size_t{1} << 23;

// 4 (1-y^2)(a+2y)^2 + b^4 and its derivative in y.
cplx kernel_denominator(cplx y, cplx a, double b4) {
    const cplx s = a + 2.0 * y;
    return 4.0 * (1.0 - y * y) * s * s + b4;
}

cplx kernel_denominator_slope(cplx y, cplx a) {
    const cplx s = a + 2.0 * y;
    return -8.0 * y * s * s + 16.0 * (1.0 - y * y) * s;
}

cplx kernel_value(double y, cplx a, double b4) {
    const double one_minus = 1.0 - y * y;
    if (one_minus <= 0.0) return 0.0;
    const cplx s = a + 2.0 * y;
    return std::sqrt(one_minus) / (4.0 * one_minus * s * s + b4);
}

// Roots of the kernel denominator, a quartic in y.
std::array<cplx, 4> denominator_roots(cplx a, double b4) {
    // -16 y^4 - 16 a y^3 + (16 - 4a^2) y^2 + 16 a y + 4 a^2 + b^4, made monic.
    const cplx c3 = a;
    const cplx c2 = -(16.0 - 4.0 * a * a) / 16.0;
    const cplx c1 = -a;
    const cplx c0 = -(4.0 * a * a + b4) / 16.0;
    Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(3, 2) = 1.0;
    companion(0, 3) = -c0;
    companion(1, 3) = -c1;
    companion(2, 3) = -c2;
    companion(3, 3) = -c3;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion, false);
    std::array<cplx, 4> roots;
    for (int i = 0; i < 4; ++i) roots[i] = solver.eigenvalues()[i];
    return roots;
}

template <class F>
double golden_maximum(F&& f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

void require_dynamics_params(const ModelParams& params) {
    validate(params);
    if (params.g == 0.0) {
        throw ParameterError("dynamics require g > 0 (the bare exciton does not decay)");
    }
}

}  // namespace

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::c_e: return "c_e";
        case Quantity::c_e_s: return "c_e_s";
        case Quantity::c_e_b: return "c_e_b";
        case Quantity::p_e: return "P_e";
        case Quantity::p_e_s: return "P_e_s";
        case Quantity::p_e_b: return "P_e_b";
    }
    return "?";
}

bool is_probability(Quantity q) {
    return q == Quantity::p_e || q == Quantity::p_e_s || q == Quantity::p_e_b;
}

cplx kernel(double y, const ModelParams& params, bool losses) {
    if (!(std::abs(y) <= 1.0)) throw DomainError("kernel argument outside [-1, 1]");
    const cplx a = losses ? params.detuning_eff() : cplx{params.detuning(), 0.0};
    const double b = params.coupling();
    return kernel_value(y, a, b * b * b * b);
}

// --------------------------- scattering integral ---------------------------

ScatteringIntegrator::ScatteringIntegrator(const ModelParams& params, double tol)
    : params_(params), tol_(tol) {
    require_dynamics_params(params);
    if (!(tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");
    a_ = params.lossy() ? params.detuning_eff() : cplx{params.detuning(), 0.0};
    b_ = params.coupling();
    const double b4 = b_ * b_ * b_ * b_;
    strip_ = std::numeric_limits<double>::infinity();
    for (cplx y : denominator_roots(a_, b4)) {
        strip_ = std::min(strip_, std::abs(std::acos(-y).imag()));
    }
    if (!(strip_ > 1e-9)) {
        throw NumericalError("kernel has a pole on the integration path (losses too large?)");
    }
}

std::size_t ScatteringIntegrator::initial_intervals(double z) const {
    // Trapezoid error on a 2pi-periodic integrand with 2M nodes is about
    // exp(z sinh(eta) - 2 M eta) for any eta inside the analytic strip.
    const double b2 = b_ * b_;
    const double budget = 40.0 + std::log(std::max(1.0, 1.0 / b2));
    double best = std::numeric_limits<double>::infinity();
    double eta = std::min(0.5 * strip_, 2.0);
    for (int i = 0; i < 60; ++i, eta *= 0.8) {
        best = std::min(best, (budget + z * std::sinh(eta)) / (2.0 * eta));
    }
    if (!(best <= static_cast<double>(kMaxIntervals))) {
        std::ostringstream msg;
        msg << "c_e^s quadrature would need about " << best << " nodes at 2Jt = " << z
            << " (limit " << kMaxIntervals << ")";
        throw NumericalError(msg.str());
    }
    std::size_t m = kMinIntervals;
    while (static_cast<double>(m) < best) m *= 2;
    return m;
}

std::shared_ptr<const ScatteringIntegrator::Level> ScatteringIntegrator::level(
    std::size_t intervals) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = levels_.find(intervals); it != levels_.end()) return it->second;
    }
    auto lvl = std::make_shared<Level>();
    lvl->intervals = intervals;
    lvl->cos_theta.resize(intervals + 1);
    lvl->weight.resize(intervals + 1);
    const double b4 = b_ * b_ * b_ * b_;
    const double h = pi / static_cast<double>(intervals);
    for (std::size_t j = 0; j <= intervals; ++j) {
        const double theta = h * static_cast<double>(j);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const cplx w = a_ - 2.0 * c;
        lvl->cos_theta[j] = c;
        lvl->weight[j] = s * s / (4.0 * s * s * w * w + b4);
    }
    std::lock_guard lock(mutex_);
    auto [it, inserted] = levels_.emplace(intervals, std::move(lvl));
    return it->second;
}

QuadratureResult ScatteringIntegrator::evaluate(double t) const {
    if (!(t >= 0.0)) throw DomainError("c_e^s requires t >= 0");
    const double j = params_.j_hop;
    const double z = 2.0 * j * t;
    const double pref = 4.0 * b_ * b_ / pi;
    const cplx carrier = std::exp(cplx{0.0, -1.0} * params_.epsilon_eff() * t);
    const double scale = pref * std::abs(carrier);

    std::size_t m = initial_intervals(z);
    double err = std::numeric_limits<double>::infinity();
    while (true) {
        const auto lvl = level(m);
        cplx even{};
        cplx odd{};
        double magnitude = 0.0;
        for (std::size_t i = 0; i <= m; ++i) {
            const double phase = -z * lvl->cos_theta[i];
            const cplx term = lvl->weight[i] * cplx{std::cos(phase), std::sin(phase)};
            magnitude += std::abs(lvl->weight[i]);
            if (i % 2 == 0) {
                even += term;
            } else {
                odd += term;
            }
        }
        const double h = pi / static_cast<double>(m);
        const cplx fine = h * (even + odd);
        const cplx coarse = 2.0 * h * even;
        err = scale * std::abs(fine - coarse);
        // Below the rounding floor of the sum further refinement cannot help.
        const double rounding = 1e3 * std::numeric_limits<double>::epsilon() * h * magnitude;
        if (err <= tol_ || std::abs(fine - coarse) <= rounding) {
            return {carrier * pref * fine, err, m + 1};
        }
        if (m >= kMaxIntervals) {
            std::ostringstream msg;
            msg << "c_e^s quadrature did not converge at t = " << t
                << ", error estimate " << err;
            throw NumericalError(msg.str());
        }
        m *= 2;
    }
}

cplx c_e_scattering(double t, const ModelParams& params, double tol) {
    return ScatteringIntegrator(params, tol)(t);
}

// --------------------------- bound / pole terms ---------------------------

cplx c_e_bound(double t, const ModelParams& params) {
    require_dynamics_params(params);
    if (params.lossy()) {
        throw ParameterError("bound-state contribution with losses is not supported");
    }
    if (!(t >= 0.0)) throw DomainError("c_e^b requires t >= 0");
    const auto pair = bound_states(params);
    const cplx mi{0.0, -1.0};
    return pair.lower.weight() * std::exp(mi * pair.lower.omega * t) +
           pair.upper.weight() * std::exp(mi * pair.upper.omega * t);
}

std::vector<ResolventPole> resolvent_poles(const ModelParams& params) {
    require_dynamics_params(params);
    const cplx a = params.lossy() ? params.detuning_eff() : cplx{params.detuning(), 0.0};
    const double b = params.coupling();
    const double b2 = b * b;
    std::vector<ResolventPole> poles;
    for (cplx eta : quartic_roots(a, b)) {
        if (std::abs(eta) >= 1.0 - kLocalizationMargin) continue;
        ResolventPole p;
        p.eta = eta;
        p.branch = eta.real() > 0.0 ? Branch::lower : Branch::upper;
        p.energy = params.epsilon_eff() - params.j_hop * (eta + 1.0 / eta);
        const cplx e2 = eta * eta;
        const cplx one_minus = 1.0 - e2;
        p.residue = 1.0 / (1.0 + b2 * e2 * (1.0 + e2) / (one_minus * one_minus * one_minus));
        poles.push_back(p);
    }
    if (poles.size() != 2 || poles[0].branch == poles[1].branch) {
        throw NumericalError("expected one resolvent pole per branch on the physical sheet, found " +
                             std::to_string(poles.size()));
    }
    if (poles[0].branch != Branch::lower) std::swap(poles[0], poles[1]);
    return poles;
}

ExcitonPropagator::ExcitonPropagator(const ModelParams& params, double tol)
    : integrator_(params, tol), poles_(resolvent_poles(params)) {}

cplx ExcitonPropagator::discrete(double t) const {
    cplx sum{};
    for (const auto& p : poles_) sum += p.residue * std::exp(cplx{0.0, -1.0} * p.energy * t);
    return sum;
}

// --------------------------- fits and analysis ---------------------------

ExponentialFit exponential_fit(const TimeSeries& series, double t_lo, double t_hi) {
    if (is_probability(series.label)) {
        throw ParameterError("exponential_fit expects an amplitude series");
    }
    if (series.times.size() != series.values.size()) {
        throw ParameterError("time series has mismatched lengths");
    }
    std::vector<double> ts, log_mag, phase;
    double last_phase = 0.0;
    double offset = 0.0;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t < t_lo || t > t_hi) continue;
        const cplx c = series.values[i];
        const double mag = std::abs(c);
        if (!(mag > 0.0)) throw NumericalError("zero amplitude inside the fit window");
        double ph = std::arg(c) + offset;
        if (!ts.empty()) {
            while (ph - last_phase > pi) {
                ph -= 2.0 * pi;
                offset -= 2.0 * pi;
            }
            while (ph - last_phase < -pi) {
                ph += 2.0 * pi;
                offset += 2.0 * pi;
            }
        }
        last_phase = ph;
        ts.push_back(t);
        log_mag.push_back(std::log(mag));
        phase.push_back(ph);
    }
    if (ts.size() < 3) throw ParameterError("fit window holds fewer than three samples");

    ExponentialFit fit;
    fit.points = ts.size();
    fit.rate = -2.0 * least_squares_slope(ts, log_mag);
    fit.tau = 1.0 / fit.rate;
    fit.phi = -least_squares_slope(ts, phase);
    for (std::size_t i = 1; i < log_mag.size(); ++i) {
        if (log_mag[i] > log_mag[i - 1]) fit.monotone = false;
    }
    return fit;
}

FgrEstimate fgr(const ModelParams& params) {
    validate(params);
    if (params.g == 0.0) throw ParameterError("golden-rule lifetime diverges at g = 0");
    const Momentum k = momentum_at_energy(params.delta, params);
    return {params.j_hop * std::sin(k.value()) / (params.g * params.g), params.delta};
}

DecayAnalysis pole_analysis(const ModelParams& params) {
    require_dynamics_params(params);
    if (params.gamma_c > 0.0) {
        throw ParameterError("pole analysis supports lossless or exciton-lossy parameters only");
    }
    const auto golden = fgr(params);
    const double j = params.j_hop;
    const cplx a = params.lossy() ? params.detuning_eff() : cplx{params.detuning(), 0.0};
    const double b = params.coupling();
    const double b4 = b * b * b * b;

    // Weak-coupling seed, then damped Newton on the denominator.
    const double sin_k = std::sin(momentum_at_energy(params.delta, params).value());
    cplx y = -0.5 * a + cplx{0.0, b * b / (4.0 * sin_k)};
    cplx q = kernel_denominator(y, a, b4);
    for (int it = 0; it < 200 && std::abs(q) >= 1e-12; ++it) {
        const cplx slope = kernel_denominator_slope(y, a);
        if (slope == cplx{}) break;
        const cplx step = q / slope;
        double damping = 1.0;
        cplx trial = y - step;
        cplx q_trial = kernel_denominator(trial, a, b4);
        while (std::abs(q_trial) > std::abs(q) && damping > 1e-6) {
            damping *= 0.5;
            trial = y - damping * step;
            q_trial = kernel_denominator(trial, a, b4);
        }
        y = trial;
        q = q_trial;
    }
    if (!(std::abs(q) < 1e-12) || !(y.imag() > 0.0) || !(std::abs(y.real()) < 1.0)) {
        std::ostringstream msg;
        msg << "pole finder diverged: y = " << y << ", |denominator| = " << std::abs(q);
        throw NumericalError(msg.str());
    }

    DecayAnalysis out;
    out.y_p = y;
    out.a_p = std::sqrt(1.0 - y * y) / kernel_denominator_slope(y, a);
    out.tau0 = 1.0 / (4.0 * j * y.imag());
    out.phi = params.epsilon - 2.0 * j * y.real();
    out.delta_phi = out.phi - params.delta;
    out.tau0_fgr = golden.tau0;
    out.ill_conditioned = (1.0 - std::abs(y.real())) < 5.0 * y.imag();

    // Edge peaks of |F|: u is the distance from the band edge in y.
    const double centre = -0.5 * a.real();
    auto edge_peak = [&](double edge) {
        const double s2 = std::norm(a + 2.0 * edge);
        const double u_est = b4 / (8.0 * s2);
        double width = std::min(0.1, 50.0 * u_est);
        width = std::min(width, 0.5 * std::abs(edge - centre));
        const double u = golden_maximum(
            [&](double u) { return std::abs(kernel_value(edge - edge * u, a, b4)); }, 0.0, width);
        return edge - edge * u;
    };
    out.y_star_minus = edge_peak(-1.0);
    out.y_star_plus = edge_peak(1.0);
    out.dy_minus = std::abs(out.y_star_minus + 1.0);
    out.dy_plus = std::abs(out.y_star_plus - 1.0);
    out.tau1_minus = 1.0 / (4.0 * j * out.dy_minus);
    out.tau1_plus = 1.0 / (4.0 * j * out.dy_plus);

    const double g2 = params.g * params.g;
    const double root = 2.0 * std::sqrt(2.0 * pi * j);
    const cplx shift = params.delta_eff() - params.epsilon_eff();
    out.a_minus = g2 / (root * (shift - 2.0 * j) * (shift - 2.0 * j));
    out.a_plus = g2 / (root * (shift + 2.0 * j) * (shift + 2.0 * j));
    return out;
}

TailPrediction tail_prediction(double t, const ModelParams& params, const DecayAnalysis& an) {
    if (!(t > 0.0)) throw DomainError("tail prediction requires t > 0");
    const double j = params.j_hop;
    const cplx i{0.0, 1.0};
    const cplx carrier = std::exp(-i * params.epsilon_eff() * t);
    const double b = params.coupling();

    TailPrediction out;
    out.exponential = 8.0 * i * an.a_p * b * b * carrier * std::exp(2.0 * i * an.y_p * j * t);
    out.intermediate =
        carrier / std::sqrt(t) *
        (an.a_minus * std::exp(-2.0 * i * j * t) * std::exp(-t / (2.0 * an.tau1_minus)) +
         an.a_plus * std::exp(2.0 * i * j * t) * std::exp(-t / (2.0 * an.tau1_plus)));
    out.asymptotic = 2.0 * j * carrier / (params.g * params.g) *
                     boost::math::cyl_bessel_j(1, 2.0 * j * t) / t;
    return out;
}

DynamicsBundle full_dynamics(const ModelParams& params, std::span<const double> t_grid,
                             double tol) {
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw ParameterError("time grid must be ascending");
    }
    const ScatteringIntegrator integrator(params, tol);
    const bool with_bound = !params.lossy();
    BoundPair pair{};
    if (with_bound) pair = bound_states(params);

    DynamicsBundle out;
    auto init = [&](TimeSeries& s, Quantity q) {
        s.label = q;
        s.params = params;
        s.times.assign(t_grid.begin(), t_grid.end());
        s.values.resize(t_grid.size());
    };
    init(out.c_e_s, Quantity::c_e_s);
    init(out.p_e_s, Quantity::p_e_s);
    if (with_bound) {
        init(out.p_e, Quantity::p_e);
        init(out.p_e_b, Quantity::p_e_b);
    } else {
        out.p_e.label = Quantity::p_e;
        out.p_e_b.label = Quantity::p_e_b;
    }

    parallel_for(t_grid.size(), [&](std::size_t n) {
        const double t = t_grid[n];
        const cplx cs = integrator(t);
        out.c_e_s.values[n] = cs;
        out.p_e_s.values[n] = std::norm(cs);
        if (with_bound) {
            const cplx mi{0.0, -1.0};
            const cplx cb = pair.lower.weight() * std::exp(mi * pair.lower.omega * t) +
                            pair.upper.weight() * std::exp(mi * pair.upper.omega * t);
            out.p_e_b.values[n] = std::norm(cb);
            out.p_e.values[n] = std::norm(cs + cb);
        }
    });
    return out;
}

double envelope_period(const ModelParams& params) { return pi / (2.0 * params.j_hop); }

std::vector<EnvelopePoint> oscillation_envelope(const std::function<double(double)>& f,
                                                std::span<const double> anchors, double period,
                                                int samples) {
    if (samples < 3) throw ParameterError("envelope needs at least three samples per period");
    std::vector<EnvelopePoint> out(anchors.size());
    parallel_for(anchors.size(), [&](std::size_t n) {
        const double step = period / static_cast<double>(samples - 1);
        std::vector<double> v(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i) v[i] = f(anchors[n] + step * i);
        const auto best = std::max_element(v.begin(), v.end()) - v.begin();
        double t = anchors[n] + step * static_cast<double>(best);
        double value = v[best];
        if (best > 0 && best + 1 < samples) {
            const double fm = v[best - 1];
            const double f0 = v[best];
            const double fp = v[best + 1];
            const double curv = fm - 2.0 * f0 + fp;
            if (curv < 0.0) {
                const double shift = 0.5 * (fm - fp) / curv;
                t += shift * step;
                value = f0 - 0.25 * (fm - fp) * shift;
            }
        }
        out[n] = {t, value};
    });
    return out;
}

double loglog_slope(std::span<const EnvelopePoint> points) {
    if (points.size() < 2) throw ParameterError("slope fit needs at least two points");
    std::vector<double> x, y;
    for (const auto& p : points) {
        if (!(p.value > 0.0) || !(p.t > 0.0)) throw NumericalError("non-positive envelope point");
        x.push_back(std::log(p.t));
        y.push_back(std::log(p.value));
    }
    return least_squares_slope(x, y);
}

}  // namespace wqed
