#include "kdvtbc/continuous.hpp"

#include "kdvtbc/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>

namespace kdvtbc {

namespace {

cplx eval(cplx l, cplx s, const ModelParams& p) {
    return s + l * (p.c + l * (-p.alpha * s + l * p.eps));
}

cplx deriv(cplx l, cplx s, const ModelParams& p) {
    return p.c + l * (-2.0 * p.alpha * s + 3.0 * p.eps * l);
}

} // namespace

double cubic_residual(cplx lambda, cplx s, const ModelParams& params) { return std::abs(eval(lambda, s, params)); }

namespace {

/// Polished eigenvalues of the companion matrix, sorted by real then imaginary part.
std::array<cplx, 3> polished_roots(cplx s, const ModelParams& params) {
    // companion matrix of l^3 + b2 l^2 + b1 l + b0
    const cplx b2 = -params.alpha * s / params.eps;
    const cplx b1 = params.c / params.eps;
    const cplx b0 = s / params.eps;
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(1, 0) = 1.0;
    m(2, 1) = 1.0;
    m(0, 2) = -b0;
    m(1, 2) = -b1;
    m(2, 2) = -b2;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(m, false);
    if (es.info() != Eigen::Success)
        throw NumericalError("cubic_roots: eigensolver failed");

    std::array<cplx, 3> r;
    for (int k = 0; k < 3; ++k) {
        cplx l = es.eigenvalues()[k];
        const cplx d = deriv(l, s, params);
        if (d != 0.0) {
            const cplx polished = l - eval(l, s, params) / d;
            if (std::abs(eval(polished, s, params)) <= std::abs(eval(l, s, params)))
                l = polished;
        }
        r[static_cast<std::size_t>(k)] = l;
    }
    std::sort(r.begin(), r.end(), [](cplx x, cplx y) {
        if (x.real() != y.real())
            return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return r;
}

} // namespace

ContinuousRoots cubic_roots(cplx s, const ModelParams& params) {
    params.validate();
    if (s.real() < 0.0)
        throw ParameterError("cubic_roots: Re(s) must be >= 0");
    if (s.real() > 0.0) {
        const auto r = polished_roots(s, params);
        if (!(r[0].real() < -1e-12))
            throw NumericalError("cubic_roots: no root with negative real part for Re(s) > 0");
        return {r[0], r[1], r[2], s};
    }

    // Labels come from s + eta, values from s itself: each labelled root is
    // replaced by the nearest unused root on the imaginary axis.
    const auto labelled = polished_roots(s + 1e-8 * std::max(1.0, std::abs(s)), params);
    const auto exact = polished_roots(s, params);
    std::array<bool, 3> used{};
    std::array<cplx, 3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        std::size_t best = 3;
        for (std::size_t i = 0; i < 3; ++i)
            if (!used[i] && (best == 3 || std::abs(exact[i] - labelled[k]) < std::abs(exact[best] - labelled[k])))
                best = i;
        used[best] = true;
        out[k] = exact[best];
    }
    return {out[0], out[1], out[2], s};
}

double stability_functional(double xi, const ModelParams& params) {
    const cplx l1 = cubic_roots(cplx(0.0, xi), params).lambda1;
    const cplx ixi(0.0, xi);
    return params.c / 2.0 + params.eps * ((l1 * l1).real() - std::norm(l1) / 2.0) - params.alpha * (ixi * l1).real();
}

} // namespace kdvtbc
