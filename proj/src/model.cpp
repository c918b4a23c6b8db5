#include "kdvtbc/model.hpp"

#include "kdvtbc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace kdvtbc {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw ParameterError(std::string(name) + " must be finite");
}

constexpr double decay_tol = 1e-12;

} // namespace

void ModelParams::validate() const {
    require_finite(c, "c");
    require_finite(alpha, "alpha");
    require_finite(eps, "eps");
    if (!(eps > 0.0))
        throw ParameterError("eps must be > 0 (got " + std::to_string(eps) + ")");
    if (!(alpha >= 0.0))
        throw ParameterError("alpha must be >= 0 (got " + std::to_string(alpha) + ")");
}

Grid Grid::make(double x_left, double x_right, double dx, double dt, int N) {
    require_finite(x_left, "x_left");
    require_finite(x_right, "x_right");
    if (!(x_left < x_right))
        throw ParameterError("x_left must be < x_right");
    if (!(dx > 0.0) || !std::isfinite(dx))
        throw ParameterError("dx must be > 0");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ParameterError("dt must be > 0");
    if (N < 0)
        throw ParameterError("N must be >= 0");

    const double len = x_right - x_left;
    const double ratio = len / dx;
    if (ratio > 1e9)
        throw ParameterError("dx too small for the interval");
    const int J = static_cast<int>(std::lround(ratio));
    if (J < 5)
        throw ParameterError("J = (x_right - x_left)/dx must be >= 5 (got " + std::to_string(J) + ")");
    if (std::abs(J * dx - len) > 1e-12 * len)
        throw ParameterError("dx does not divide [x_left, x_right] (J*dx differs from the length by more than 1e-12 relative)");

    Grid g;
    g.x_left = x_left;
    g.x_right = x_right;
    g.dx = dx;
    g.dt = dt;
    g.J = J;
    g.N = N;
    return g;
}

SchemeRatios derive_ratios(const ModelParams& params, const Grid& grid) {
    params.validate();
    const double dx = grid.dx, dt = grid.dt;
    if (!(dx > 0.0) || !(dt > 0.0))
        throw ParameterError("grid steps must be > 0");
    SchemeRatios r;
    r.lambda_H = params.c * dt / dx;
    r.lambda_D = params.eps * dt / (dx * dx * dx);
    r.lambda_B = params.alpha / (dx * dx);
    r.a = params.c * dx * dx / params.eps;
    r.mu = 4.0 * params.alpha * dx / (params.eps * dt);
    if (!(r.lambda_D > 0.0) || !std::isfinite(r.lambda_D))
        throw ParameterError("lambda_D = eps*dt/dx^3 must be positive and finite");
    return r;
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : v_)
        m = std::max(m, std::abs(v));
    return m;
}

InitialKind parse_initial_kind(std::string_view name) {
    if (name == "gaussian")
        return InitialKind::gaussian;
    if (name == "wavepacket")
        return InitialKind::wavepacket;
    if (name == "custom")
        return InitialKind::custom;
    throw ParameterError("unknown initial condition '" + std::string(name) + "'");
}

std::string_view to_string(InitialKind kind) {
    switch (kind) {
    case InitialKind::gaussian: return "gaussian";
    case InitialKind::wavepacket: return "wavepacket";
    case InitialKind::custom: return "custom";
    }
    return "?";
}

Profile builtin_profile(InitialKind kind) {
    switch (kind) {
    case InitialKind::gaussian:
        return [](double x) { return std::exp(-400.0 * (x - 0.5) * (x - 0.5)); };
    case InitialKind::wavepacket:
        return [](double x) {
            return std::exp(-400.0 * (x - 0.5) * (x - 0.5)) * std::sin(20.0 * std::numbers::pi * x);
        };
    case InitialKind::custom:
        break;
    }
    throw ParameterError("custom initial condition needs an explicit profile");
}

Field sample_initial(const Profile& u0, const Grid& grid) {
    if (!u0)
        throw ParameterError("empty initial profile");
    // endpoints, ghost positions and a band of one tenth of the interval outside
    const double band = 0.1 * (grid.x_right - grid.x_left);
    for (int k = 0; k <= 16; ++k) {
        const double off = k <= 2 ? k * grid.dx : band * (k - 2) / 14.0;
        for (double x : {grid.x_left - off, grid.x_right + off}) {
            const double v = u0(x);
            if (!(std::abs(v) < decay_tol))
                throw ParameterError("initial profile does not vanish at the boundary (|u0(" + std::to_string(x) +
                                     ")| = " + std::to_string(std::abs(v)) + " >= 1e-12)");
        }
    }
    Field f(grid.J);
    for (int j = 0; j <= grid.J; ++j)
        f[j] = u0(grid.x(j));
    return f;
}

Field sample_initial(InitialKind kind, const Grid& grid) {
    return sample_initial(builtin_profile(kind), grid);
}

} // namespace kdvtbc
