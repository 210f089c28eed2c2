#include "wqed/field.hpp"

#include "wqed/bound_states.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/emission.hpp"
#include "wqed/errors.hpp"
#include "wqed/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wqed {

namespace {

constexpr std::size_t kMaxPanels = std::size_t{1} << 15;

struct Node {
    double q;
    cplx e_iq;       // e^{iq}
    cplx forward;    // w c^* e^{-i w t}, multiplies e^{iqx}
    cplx backward;   // w c e^{-i w t}, multiplies e^{-iqx}
};

// Panel edges on [0, pi]: a uniform split plus a geometric cluster around
// the resonance momentum when delta lies inside the band.
std::vector<double> panel_edges(const ModelParams& params, std::size_t uniform) {
    std::vector<double> edges;
    for (std::size_t i = 0; i <= uniform; ++i) {
        edges.push_back(pi * static_cast<double>(i) / static_cast<double>(uniform));
    }
    if (in_band(params.delta, params)) {
        const double k0 = momentum_at_energy(params.delta, params).value();
        const double v = group_velocity(Momentum(k0), params);
        const double width = std::max(1e-6, params.g * params.g / (v * v));
        edges.push_back(k0);
        for (double w = width / 4.0; w < pi; w *= 2.0) {
            if (k0 - w > 0.0) edges.push_back(k0 - w);
            if (k0 + w < pi) edges.push_back(k0 + w);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::vector<double> refine(const std::vector<double>& edges) {
    std::vector<double> out;
    out.reserve(2 * edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        out.push_back(edges[i]);
        out.push_back(0.5 * (edges[i] + edges[i + 1]));
    }
    out.push_back(edges.back());
    return out;
}

std::vector<Node> nodes_for(const std::vector<double>& edges, double t,
                            const ModelParams& params) {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& xs = rule::abscissa();
    const auto& ws = rule::weights();
    std::vector<Node> nodes;
    nodes.reserve(20 * edges.size());
    auto push = [&](double q, double w) {
        const cplx c = c_k(Momentum(q), params);
        const cplx carrier = std::exp(cplx{0.0, -dispersion(Momentum(q), params) * t});
        nodes.push_back({q, std::exp(cplx{0.0, q}), w * std::conj(c) * carrier, w * c * carrier});
    };
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            push(mid + half * xs[i], half * ws[i]);
            if (xs[i] != 0.0) push(mid - half * xs[i], half * ws[i]);
        }
    }
    return nodes;
}

// Continuum part of phi_x for x = 0 .. half_width.
std::vector<cplx> continuum_part(const std::vector<Node>& nodes, long half_width) {
    const std::size_t n_x = static_cast<std::size_t>(half_width) + 1;
    std::vector<cplx> out(n_x);
    const std::size_t chunk = 16;
    const std::size_t n_chunks = (nodes.size() + chunk - 1) / chunk;
    std::vector<std::vector<cplx>> partial(n_chunks, std::vector<cplx>(n_x));
    parallel_for(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * chunk;
        const std::size_t hi = std::min(nodes.size(), lo + chunk);
        auto& acc = partial[c];
        for (std::size_t n = lo; n < hi; ++n) {
            const Node& node = nodes[n];
            cplx phase{1.0, 0.0};
            for (std::size_t x = 0; x < n_x; ++x) {
                acc[x] += node.forward * phase + node.backward * std::conj(phase);
                phase *= node.e_iq;
                if (x % 64 == 63) phase = std::polar(1.0, node.q * static_cast<double>(x + 1));
            }
        }
    });
    for (const auto& acc : partial) {
        for (std::size_t x = 0; x < n_x; ++x) out[x] += acc[x];
    }
    for (auto& v : out) v /= 2.0 * pi;
    return out;
}

}  // namespace

cplx FieldProfile::at(long x) const {
    if (positions.empty() || x < positions.front() || x > positions.back()) {
        throw DomainError("site outside the profile window");
    }
    return amplitudes[static_cast<std::size_t>(x - positions.front())];
}

FieldProfile field_profile(double t, long half_width, const ModelParams& params, double tol) {
    validate(params);
    if (params.lossy()) throw ParameterError("field profile supports lossless parameters only");
    if (params.g == 0.0) throw ParameterError("field profile requires g > 0");
    if (!(t >= 0.0)) throw DomainError("field profile requires t >= 0");
    if (half_width < 0) throw ParameterError("negative window half-width");
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");

    // Each Gauss panel should span a few radians of the phase w_k t + k x.
    const double phase_span = pi * (2.0 * params.j_hop * t + static_cast<double>(half_width));
    std::size_t uniform = 16;
    while (static_cast<double>(uniform) * 3.0 < phase_span) uniform *= 2;

    std::vector<double> edges = panel_edges(params, uniform);
    std::vector<cplx> coarse = continuum_part(nodes_for(edges, t, params), half_width);
    std::vector<cplx> fine;
    while (true) {
        edges = refine(edges);
        fine = continuum_part(nodes_for(edges, t, params), half_width);
        double diff = 0.0;
        for (std::size_t i = 0; i < fine.size(); ++i) diff = std::max(diff, std::abs(fine[i] - coarse[i]));
        if (diff <= tol) break;
        if (edges.size() > kMaxPanels) {
            std::ostringstream msg;
            msg << "field quadrature did not converge at t = " << t << ", change " << diff;
            throw NumericalError(msg.str());
        }
        coarse = std::move(fine);
    }

    const auto pair = bound_states(params);
    FieldProfile out;
    out.time = t;
    out.x_max = 2.0 * params.j_hop * t;
    const std::size_t n = static_cast<std::size_t>(2 * half_width + 1);
    out.positions.resize(n);
    out.amplitudes.resize(n);
    for (long x = -half_width; x <= half_width; ++x) {
        const long ax = std::abs(x);
        cplx v = fine[static_cast<std::size_t>(ax)];
        for (const BoundState* s : {&pair.lower, &pair.upper}) {
            v += s->c_overlap * s->norm * std::pow(s->eta, static_cast<double>(ax)) *
                 std::exp(cplx{0.0, -s->omega * t});
        }
        const std::size_t i = static_cast<std::size_t>(x + half_width);
        out.positions[i] = x;
        out.amplitudes[i] = v;
    }

    out.c_e = ScatteringIntegrator(params)(t) + c_e_bound(t, params);
    double norm = std::norm(out.c_e);
    for (const cplx& a : out.amplitudes) norm += std::norm(a);
    out.leaked_norm = std::max(0.0, 1.0 - norm);

    const long cone = static_cast<long>(std::ceil(out.x_max)) + kConeMargin;
    if (half_width < cone || out.leaked_norm > kLeakTolerance) {
        std::ostringstream msg;
        msg << "window |x| <= " << half_width << " truncates the emitted field (causal cone "
            << out.x_max << "); estimated leaked norm " << out.leaked_norm;
        out.warning = msg.str();
    }
    return out;
}

double profile_norm_check(const FieldProfile& profile, cplx c_e_t) {
    double norm = std::norm(c_e_t);
    for (const cplx& a : profile.amplitudes) norm += std::norm(a);
    return std::abs(norm - 1.0);
}

double outside_cone_slope(const FieldProfile& profile) {
    if (!(profile.x_max > 0.0)) throw DomainError("no causal cone at t = 0");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < profile.positions.size(); ++i) {
        const double ax = std::abs(static_cast<double>(profile.positions[i]));
        const double p = std::norm(profile.amplitudes[i]);
        if (ax <= profile.x_max || ax >= 1.5 * profile.x_max || std::sqrt(p) < 1e-14) continue;
        xs.push_back(ax);
        ys.push_back(std::log(p));
    }
    if (xs.size() < 3) throw DomainError("too few usable sites outside the causal cone");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

}  // namespace wqed
