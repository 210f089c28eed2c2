// grids.hpp — linear and logarithmic sample grids

#pragma once

#include "wqed/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace wqed {

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n == 0) throw ParameterError("grid needs at least one point");
    if (n == 1) return {lo};
    if (!(hi > lo)) throw ParameterError("grid bounds must be ascending");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.back() = hi;
    return g;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0)) throw ParameterError("logarithmic grid needs a positive lower bound");
    auto g = linear_grid(std::log(lo), std::log(hi), n);
    for (double& x : g) x = std::exp(x);
    g.front() = lo;
    if (n > 1) g.back() = hi;
    return g;
}

}  // namespace wqed
