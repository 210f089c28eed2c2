#include "wqed/bound_states.hpp"

#include "wqed/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wqed {

namespace {

cplx quartic_value(cplx eta, cplx a, double b2) {
    return (((eta + a) * eta + b2) * eta - a) * eta - 1.0;
}

cplx quartic_slope(cplx eta, cplx a, double b2) {
    return ((4.0 * eta + 3.0 * a) * eta + 2.0 * b2) * eta - a;
}

cplx polish(cplx eta, cplx a, double b2) {
    for (int it = 0; it < 8; ++it) {
        const cplx d = quartic_slope(eta, a, b2);
        if (d == cplx{}) break;
        const cplx step = quartic_value(eta, a, b2) / d;
        eta -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(eta))) break;
    }
    return eta;
}

void require_bound_params(const ModelParams& params) {
    validate(params);
    if (params.lossy()) {
        throw ParameterError("bound states are defined for lossless parameters only");
    }
    if (params.g == 0.0) throw ParameterError("no bound states at zero coupling");
}

BoundState build(const ModelParams& p, Branch branch, double eta) {
    BoundState s;
    s.branch = branch;
    s.eta = eta;
    s.kappa = {-std::log(std::abs(eta)), eta < 0.0 ? pi : 0.0};
    s.omega = p.epsilon - p.j_hop * (eta + 1.0 / eta);
    s.d_amp = p.g / (s.omega - p.delta);
    const double e2 = eta * eta;
    s.norm = 1.0 / std::sqrt((1.0 + e2) / (1.0 - e2) + s.d_amp * s.d_amp);
    s.c_overlap = s.norm * s.d_amp;
    return s;
}

}  // namespace

std::string to_string(Branch b) { return b == Branch::lower ? "lower" : "upper"; }

double BoundState::localization_length() const { return 1.0 / std::abs(kappa); }

std::array<cplx, 4> quartic_roots(cplx a, double b) {
    const double b2 = b * b;
    // Companion matrix of the monic polynomial x^4 + c3 x^3 + c2 x^2 + c1 x + c0.
    Eigen::Matrix4cd companion = Eigen::Matrix4cd::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(3, 2) = 1.0;
    companion(0, 3) = 1.0;   // -c0
    companion(1, 3) = a;     // -c1
    companion(2, 3) = -b2;   // -c2
    companion(3, 3) = -a;    // -c3
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("quartic: companion eigenvalue solve failed");
    }
    std::array<cplx, 4> roots;
    for (int i = 0; i < 4; ++i) roots[i] = polish(solver.eigenvalues()[i], a, b2);
    std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return roots;
}

std::array<cplx, 4> quartic_roots(const ModelParams& params) {
    validate(params);
    return quartic_roots(cplx{params.detuning(), 0.0}, params.coupling());
}

std::pair<double, double> select_physical(std::span<const cplx> roots) {
    std::vector<double> lower, upper;
    for (cplx r : roots) {
        if (std::abs(r.imag()) >= kRealRootTol) continue;
        const double x = r.real();
        if (std::abs(x) >= 1.0 - kLocalizationMargin || x == 0.0) continue;
        (x > 0.0 ? lower : upper).push_back(x);
    }
    if (lower.size() != 1 || upper.size() != 1) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "bound-state branch selection failed: " << lower.size() << " lower and "
            << upper.size() << " upper candidates among roots";
        for (cplx r : roots) msg << " (" << r.real() << "," << r.imag() << ")";
        throw NumericalError(msg.str());
    }
    return {lower.front(), upper.front()};
}

BoundPair bound_states(const ModelParams& params) {
    require_bound_params(params);
    const auto roots = quartic_roots(params);
    auto [eta_lower, eta_upper] = select_physical(roots);
    // Final real Newton refinement; the complex polish can leave a tiny
    // imaginary drift that was discarded above.
    const cplx a{params.detuning(), 0.0};
    const double b2 = params.coupling() * params.coupling();
    eta_lower = polish(cplx{eta_lower, 0.0}, a, b2).real();
    eta_upper = polish(cplx{eta_upper, 0.0}, a, b2).real();
    return {build(params, Branch::lower, eta_lower), build(params, Branch::upper, eta_upper)};
}

BoundState bound_state(const ModelParams& params, Branch branch) {
    auto pair = bound_states(params);
    return branch == Branch::lower ? pair.lower : pair.upper;
}

std::vector<BoundEnergyRow> sweep_bound_energies(const ModelParams& base,
                                                 std::span<const double> g_grid) {
    std::vector<BoundEnergyRow> rows;
    rows.reserve(g_grid.size());
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
        if (i > 0 && !(g_grid[i] > g_grid[i - 1])) {
            throw ParameterError("coupling grid must be strictly ascending");
        }
        ModelParams p = base;
        p.g = g_grid[i];
        const auto pair = bound_states(p);
        rows.push_back({p.g, pair.lower.omega, pair.upper.omega});
        if (i > 0) {
            const auto& prev = rows[rows.size() - 2];
            if (!(rows.back().omega_minus < prev.omega_minus) ||
                !(rows.back().omega_plus > prev.omega_plus)) {
                throw NumericalError("bound energies not monotone in g at g = " +
                                     std::to_string(p.g));
            }
        }
    }
    return rows;
}

}  // namespace wqed
