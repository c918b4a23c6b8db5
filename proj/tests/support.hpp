#pragma once

#include "kdvtbc/model.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace kdvtbc::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// 10^uniform(lo, hi)
inline double log_uniform(double lo, double hi) { return std::pow(10.0, uniform(lo, hi)); }

/// c in [-5, 5], alpha in [0, 1e-2] (zero a quarter of the time), eps in [1e-4, 1e-1].
inline ModelParams random_params() {
    ModelParams p;
    p.c = uniform(-5.0, 5.0);
    p.alpha = uniform(0.0, 1.0) < 0.25 ? 0.0 : log_uniform(-5.0, -2.0);
    p.eps = log_uniform(-4.0, -1.0);
    return p;
}

/// Ratios for random params on a random moderate grid.
inline SchemeRatios random_ratios() {
    const ModelParams p = random_params();
    const double dx = std::pow(2.0, -std::floor(uniform(5.0, 10.0)));
    const double dt = log_uniform(-4.0, -2.0);
    return derive_ratios(p, Grid::make(0.0, 1.0, dx, dt, 1));
}

} // namespace kdvtbc::testing
