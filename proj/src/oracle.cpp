#include "wqed/oracle.hpp"

#include "wqed/errors.hpp"
#include "wqed/parallel.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace wqed {

namespace {

// y = H x using the tridiagonal chain plus the impurity link.
Eigen::VectorXcd apply_h(const FiniteChain& c, const Eigen::VectorXcd& x) {
    const long n = c.n_sites;
    const cplx eps = c.params.epsilon_eff();
    const double j = c.params.j_hop;
    const double g = c.params.g;
    Eigen::VectorXcd y(n + 1);
    for (long i = 0; i < n; ++i) {
        cplx v = eps * x[i];
        if (i > 0) v -= j * x[i - 1];
        if (i + 1 < n) v -= j * x[i + 1];
        y[i] = v;
    }
    y[c.center] += g * x[n];
    y[n] = c.params.delta_eff() * x[n] + g * x[c.center];
    return y;
}

std::vector<long> out_of_band_indices(const FiniteChain& c) {
    std::vector<long> idx;
    const double lo = c.params.band_bottom();
    const double hi = c.params.band_top();
    for (long m = 0; m < c.eigenvalues.size(); ++m) {
        const double e = c.eigenvalues[m].real();
        if (e < lo || e > hi) idx.push_back(m);
    }
    std::sort(idx.begin(), idx.end(), [&](long a, long b) {
        return c.eigenvalues[a].real() < c.eigenvalues[b].real();
    });
    return idx;
}

}  // namespace

std::vector<double> FiniteChain::out_of_band() const {
    std::vector<double> out;
    for (long m : out_of_band_indices(*this)) out.push_back(eigenvalues[m].real());
    return out;
}

std::vector<double> FiniteChain::out_of_band_exciton_weight() const {
    std::vector<double> out;
    for (long m : out_of_band_indices(*this)) {
        const auto v = eigenvectors.col(m);
        out.push_back(std::norm(v[n_sites]) / v.squaredNorm());
    }
    return out;
}

FiniteChain build(const ModelParams& params, long n_sites) {
    validate(params);
    if (n_sites < kMinChainSites || n_sites % 2 == 0) {
        throw ParameterError("chain length must be odd and at least " +
                             std::to_string(kMinChainSites));
    }
    FiniteChain c;
    c.params = params;
    c.n_sites = n_sites;
    c.center = (n_sites - 1) / 2;
    c.t_boundary = kBoundarySafety * static_cast<double>(n_sites) / (4.0 * params.j_hop);
    c.lossy = params.lossy();
    const lapack_int dim = static_cast<lapack_int>(n_sites + 1);
    const long ex = n_sites;

    if (!c.lossy) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        for (long i = 0; i < n_sites; ++i) {
            h(i, i) = params.epsilon;
            if (i + 1 < n_sites) h(i, i + 1) = h(i + 1, i) = -params.j_hop;
        }
        h(ex, ex) = params.delta;
        h(ex, c.center) = h(c.center, ex) = params.g;
        Eigen::VectorXd w(dim);
        const lapack_int info =
            LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', dim, h.data(), dim, w.data());
        if (info != 0) throw NumericalError("symmetric eigensolver failed, info " + std::to_string(info));
        c.eigenvalues = w.cast<cplx>();
        c.eigenvectors = h.cast<cplx>();
        c.alpha = h.row(ex).transpose().cast<cplx>();
    } else {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        for (long i = 0; i < n_sites; ++i) {
            h(i, i) = params.epsilon_eff();
            if (i + 1 < n_sites) h(i, i + 1) = h(i + 1, i) = -params.j_hop;
        }
        h(ex, ex) = params.delta_eff();
        h(ex, c.center) = h(c.center, ex) = params.g;
        Eigen::VectorXcd w(dim);
        Eigen::MatrixXcd vr(dim, dim);
        lapack_complex_double dummy{};
        const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', dim, h.data(), dim,
                                              w.data(), &dummy, 1, vr.data(), dim);
        if (info != 0) throw NumericalError("general eigensolver failed, info " + std::to_string(info));
        c.eigenvalues = std::move(w);
        c.eigenvectors = std::move(vr);
        Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(dim);
        e0[ex] = 1.0;
        c.alpha = c.eigenvectors.partialPivLu().solve(e0);
    }

    std::vector<double> res(static_cast<std::size_t>(dim));
    parallel_for(res.size(), [&](std::size_t m) {
        const Eigen::VectorXcd v = c.eigenvectors.col(static_cast<long>(m));
        res[m] = (apply_h(c, v) - c.eigenvalues[static_cast<long>(m)] * v).norm() / v.norm();
    });
    c.residual = *std::max_element(res.begin(), res.end());
    if (!(c.residual < 1e-10 * params.j_hop)) {
        std::ostringstream msg;
        msg << "eigendecomposition residual " << c.residual << " exceeds 1e-10 J";
        throw NumericalError(msg.str());
    }
    return c;
}

double OracleState::norm() const {
    double s = std::norm(c_e);
    for (const cplx& a : phi) s += std::norm(a);
    return s;
}

OracleState evolve(const FiniteChain& chain, double t) {
    if (!(t >= 0.0)) throw DomainError("evolution time must be non-negative");
    const long dim = chain.n_sites + 1;
    Eigen::VectorXcd coeff(dim);
    for (long m = 0; m < dim; ++m) {
        coeff[m] = chain.alpha[m] * std::exp(cplx{0.0, -1.0} * chain.eigenvalues[m] * t);
    }
    const Eigen::VectorXcd psi = chain.eigenvectors * coeff;
    OracleState s;
    s.t = t;
    s.c_e = psi[chain.n_sites];
    s.phi.assign(psi.data(), psi.data() + chain.n_sites);
    s.beyond_boundary = t > chain.t_boundary;
    return s;
}

cplx exciton_amplitude(const FiniteChain& chain, double t) {
    if (!(t >= 0.0)) throw DomainError("evolution time must be non-negative");
    cplx sum{};
    const long ex = chain.n_sites;
    for (long m = 0; m < chain.eigenvalues.size(); ++m) {
        sum += chain.alpha[m] * chain.eigenvectors(ex, m) *
               std::exp(cplx{0.0, -1.0} * chain.eigenvalues[m] * t);
    }
    return sum;
}

Comparison compare(const FiniteChain& chain, const TimeSeries& series) {
    if (series.times.size() != series.values.size() || series.times.empty()) {
        throw ParameterError("time series is empty or has mismatched lengths");
    }
    const bool prob = is_probability(series.label);
    Comparison out;
    out.points = series.times.size();
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        const cplx ce = exciton_amplitude(chain, t);
        const double ref = prob ? std::norm(ce) : std::abs(ce);
        const double val = prob ? series.values[i].real() : std::abs(series.values[i]);
        const double dev = std::abs(ref - val);
        out.max_deviation_all = std::max(out.max_deviation_all, dev);
        if (t > chain.t_boundary) {
            ++out.beyond_boundary;
        } else {
            out.max_deviation = std::max(out.max_deviation, dev);
        }
    }
    return out;
}

Comparison compare_field(const FiniteChain& chain, const FieldProfile& profile) {
    if (profile.positions.empty()) throw ParameterError("empty field profile");
    if (-profile.positions.front() > chain.center || profile.positions.back() > chain.center) {
        throw ParameterError("field window exceeds the chain");
    }
    const OracleState s = evolve(chain, profile.time);
    Comparison out;
    out.points = profile.positions.size();
    for (std::size_t i = 0; i < profile.positions.size(); ++i) {
        const double dev =
            std::abs(std::abs(s.at(profile.positions[i], chain.center)) - std::abs(profile.amplitudes[i]));
        out.max_deviation_all = std::max(out.max_deviation_all, dev);
    }
    if (s.beyond_boundary) {
        out.beyond_boundary = out.points;
    } else {
        out.max_deviation = out.max_deviation_all;
    }
    return out;
}

}  // namespace wqed
