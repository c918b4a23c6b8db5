#include "kdvtbc/kernel_asymptotic.hpp"

#include "kdvtbc/error.hpp"
#include "kdvtbc/format.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>

namespace kdvtbc {

namespace {

void check_steps(double dt, double dx) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ParameterError("dt must be > 0");
    if (!(dx > 0.0) || !std::isfinite(dx))
        throw ParameterError("dx must be > 0");
}

cplx at(const LaurentSeries& s, std::ptrdiff_t i) {
    return i < 0 || static_cast<std::size_t>(i) >= s.size() ? cplx(0.0) : s[static_cast<std::size_t>(i)];
}

double real_checked(cplx v, const char* what, std::size_t i) {
    if (std::abs(v.imag()) > 1e-10)
        throw NumericalError(std::string("asymptotic kernel ") + what + "[" + std::to_string(i) +
                             "] is not real (imaginary part " + format_double(v.imag()) + ")");
    return v.real();
}

/// Physical shift b = 2 alpha p/(eps dt) at p = 1.
double shift_b0(const ModelParams& m, double dt) { return 2.0 * m.alpha / (m.eps * dt); }

} // namespace

LaurentSeries binomial_series(double gamma, BinomialSign sign, std::size_t N) {
    LaurentSeries s(std::vector<cplx>(N + 1), sign == BinomialSign::minus ? "(1-1/z)^g" : "(1+1/z)^g");
    double c = 1.0;
    const double sg = sign == BinomialSign::minus ? -1.0 : 1.0;
    for (std::size_t p = 0; p <= N; ++p) {
        s[p] = c;
        c *= sg * (gamma - static_cast<double>(p)) / static_cast<double>(p + 1);
    }
    return s;
}

LkdvSigma sigma_series_lkdv(double eps, double dt, std::size_t N) {
    if (!(eps > 0.0) || !(dt > 0.0))
        throw ParameterError("sigma_series_lkdv: eps and dt must be > 0");
    const double k = 2.0 / (eps * dt);
    LkdvSigma out;
    out.sigma1 = series::scale(series::mul(binomial_series(1.0 / 3.0, BinomialSign::minus, N),
                                           binomial_series(-1.0 / 3.0, BinomialSign::plus, N)),
                               -std::cbrt(k));
    out.sigma2 = series::scale(series::mul(binomial_series(2.0 / 3.0, BinomialSign::minus, N),
                                           binomial_series(-2.0 / 3.0, BinomialSign::plus, N)),
                               std::cbrt(k * k));
    out.sigma1.label = "sigma1";
    out.sigma2.label = "sigma2";
    return out;
}

Kernels assemble_lkdv_kernels(const ModelParams& params, double dt, double dx, std::size_t length, int order) {
    params.validate();
    check_steps(dt, dx);
    if (params.alpha != 0.0)
        throw ParameterError("assemble_lkdv_kernels: alpha must be 0 (use the general variant)");
    if (order != 2 && order != 3)
        throw ParameterError("assemble_lkdv_kernels: order must be 2 or 3");
    if (length == 0)
        throw ParameterError("assemble_lkdv_kernels: length must be >= 1");

    const LkdvSigma sg = sigma_series_lkdv(params.eps, dt, length);
    Kernels k;
    k.provenance = Provenance::asymptotic;
    k.variant = Variant::lkdv;
    k.order = order;
    k.ss.resize(length);
    k.ps.resize(length);
    k.su.resize(length);
    k.pu.resize(length);
    const double dx2 = dx * dx;
    for (std::size_t n = 0; n < length; ++n) {
        const auto i = static_cast<std::ptrdiff_t>(n);
        const double a1 = (at(sg.sigma1, i) + at(sg.sigma1, i - 1)).real();
        const double a2 = (at(sg.sigma2, i) + at(sg.sigma2, i - 1)).real() / 2.0;
        k.ss[n] = a1 * dx + a2 * dx2;
        k.ps[n] = -a1 * dx - a2 * dx2;
        k.su[n] = -a1 * dx - a2 * dx2;
        k.pu[n] = -a1 * dx + a2 * dx2;
    }
    const double K = order == 3 ? dx * dx2 / (3.0 * params.eps * dt) : 0.0;
    k.ss[0] += K;
    k.ps[0] += -1.0 + 2.0 * K;
    k.su[0] += 2.0 - K;
    k.pu[0] += 1.0 + 2.0 * K;
    if (length > 1) {
        k.ss[1] -= K;
        k.ps[1] += -1.0 - 2.0 * K;
        k.su[1] += 2.0 + K;
        k.pu[1] += 1.0 - 2.0 * K;
    }
    if (params.c != 0.0)
        k.warnings.push_back("lkdv kernels ignore c = " + format_double(params.c));
    k.check();
    return k;
}

GeneralExpansion general_expansion(const ModelParams& m, double dt, std::size_t N) {
    m.validate();
    if (!(dt > 0.0))
        throw ParameterError("dt must be > 0");
    const std::size_t n = N + 1;
    const double ed = m.eps * dt;
    const LaurentSeries p = series::moebius_p(n);
    const LaurentSeries p2 = series::mul(p, p);
    const LaurentSeries p3 = series::mul(p2, p);

    GeneralExpansion g;
    const double A = 2.0 * m.alpha * m.c / (3.0 * m.eps * ed) + 2.0 / ed;
    const double B = -16.0 * std::pow(m.alpha, 3) / (27.0 * ed * ed * ed);
    g.P = series::add(series::constant(m.c / m.eps, n), series::scale(p2, -4.0 * m.alpha * m.alpha / (3.0 * ed * ed)));
    g.Q = series::add(series::scale(p, A), series::scale(p3, B));
    g.Delta = series::add(series::mul(g.Q, g.Q), series::scale(series::mul(series::mul(g.P, g.P), g.P), 4.0 / 27.0));

    const double scale0 = std::norm(g.Q[0]) + std::pow(std::abs(g.P[0]), 3);
    if (std::abs(g.Delta[0]) <= 1e-14 * scale0)
        throw NumericalError("degenerate expansion point (Delta_0 = 0)");
    cplx d0 = std::sqrt(g.Delta[0]);
    if (std::abs(-g.Q[0] - d0) > std::abs(-g.Q[0] + d0))
        d0 = -d0;
    g.delta = series::power(g.Delta, 0.5, d0);
    g.zeta = series::scale(series::sub(g.delta, g.Q), 0.5);
    if (std::abs(g.zeta[0]) <= 1e-14 * std::sqrt(scale0))
        throw NumericalError("degenerate expansion point (zeta_0 = 0)");

    const cplx shift0 = 8.0 * m.alpha / (3.0 * ed);
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const cplx root = std::pow(g.zeta[0], 1.0 / 3.0);
    int best = -1;
    double best_re = 0.0;
    for (int k = 0; k < 3; ++k) {
        const cplx m0 = root * std::pow(w, k);
        const cplx l0 = shift0 + m0 - g.P[0] / (3.0 * m0);
        const double re = l0.real() - shift_b0(m, dt);
        if (best < 0 || re < best_re) {
            best = k;
            best_re = re;
        }
    }
    if (!(best_re < -1e-12))
        throw NumericalError("general expansion: no root with negative real part at p = 1");
    g.branch = best;
    const cplx mu0 = root * std::pow(w, best);
    g.mu_plus = series::power(g.zeta, 1.0 / 3.0, mu0);
    g.mu_minus = series::power(g.zeta, -1.0 / 3.0, 1.0 / mu0);
    g.lambda1 = series::add(series::add(series::scale(p, shift0), g.mu_plus),
                            series::scale(series::mul(g.P, g.mu_minus), -1.0 / 3.0));
    g.P.label = "P";
    g.Q.label = "Q";
    g.Delta.label = "Delta";
    g.delta.label = "delta";
    g.zeta.label = "zeta";
    g.mu_plus.label = "zeta^(1/3)";
    g.mu_minus.label = "zeta^(-1/3)";
    g.lambda1.label = "lambda1";
    return g;
}

LaurentSeries lambda1_weighted_general(const ModelParams& m, double dt, std::size_t N) {
    m.validate();
    if (!(dt > 0.0))
        throw ParameterError("dt must be > 0");
    const std::size_t n = N + 1;
    const double ed = m.eps * dt;
    const double a = m.alpha / ed, a2 = a * a, a3 = a2 * a;
    const double ce = m.c / m.eps;
    const double k1 = 2.0 / ed - 2.0 * m.alpha * m.c / (m.eps * ed);
    // W^3 + B2 W^2 + B1 W + B0 with B_k = b_k (1 + x)^(3-k), (1 + x) p = 1 - x
    const std::array<double, 2> B2{-8.0 * a, 8.0 * a};
    const std::array<double, 3> B1{ce + 20.0 * a2, 2.0 * ce - 40.0 * a2, ce + 20.0 * a2};
    const std::array<double, 4> B0{k1 - 16.0 * a3, k1 + 48.0 * a3, -k1 - 48.0 * a3, -k1 + 16.0 * a3};

    Eigen::Matrix3cd cm = Eigen::Matrix3cd::Zero();
    cm(1, 0) = 1.0;
    cm(2, 1) = 1.0;
    cm(0, 2) = -B0[0];
    cm(1, 2) = -B1[0];
    cm(2, 2) = -B2[0];
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(cm, false);
    int best = -1;
    double best_re = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double re = es.eigenvalues()[k].real() - shift_b0(m, dt);
        if (best < 0 || re < best_re) {
            best = k;
            best_re = re;
        }
    }
    if (!(best_re < -1e-12))
        throw NumericalError("lambda1_cubic_general: scalar cubic has no root with negative real part");

    cplx w0 = es.eigenvalues()[best];
    for (int it = 0; it < 2; ++it) {
        const cplx f = ((w0 + B2[0]) * w0 + B1[0]) * w0 + B0[0];
        const cplx df = (3.0 * w0 + 2.0 * B2[0]) * w0 + B1[0];
        if (df != 0.0)
            w0 -= f / df;
    }
    const cplx dfd = (3.0 * w0 + 2.0 * B2[0]) * w0 + B1[0];
    if (dfd == 0.0)
        throw NumericalError("lambda1_cubic_general: multiple root at p = 1");

    LaurentSeries W(std::vector<cplx>(n, 0.0), "(1+1/z) lambda1");
    std::vector<cplx> W2(n, 0.0);
    W[0] = w0;
    W2[0] = w0 * w0;
    for (std::size_t l = 1; l < n; ++l) {
        // coefficient l of the cubic with W_l = 0
        cplx sq = 0.0;
        for (std::size_t k = 1; k < l; ++k)
            sq += W[k] * W[l - k];
        cplx r = W[0] * sq;
        for (std::size_t k = 1; k < l; ++k)
            r += W[k] * W2[l - k];
        r += B2[0] * sq;
        if (l < B0.size())
            r += B0[l];
        for (std::size_t k = 1; k <= l && k < B2.size(); ++k)
            r += B2[k] * W2[l - k];
        for (std::size_t k = 1; k <= l && k < B1.size(); ++k)
            r += B1[k] * W[l - k];
        W[l] = -r / dfd;
        W2[l] = sq + 2.0 * W[0] * W[l];
    }
    return W;
}

LaurentSeries lambda1_cubic_general(const ModelParams& m, double dt, std::size_t N) {
    LaurentSeries L = lambda1_weighted_general(m, dt, N);
    // divide by (1 + x)
    for (std::size_t l = 1; l < L.size(); ++l)
        L[l] -= L[l - 1];
    L.label = "lambda1";
    return L;
}

Kernels assemble_general_kernels(const ModelParams& params, double dt, double dx, std::size_t length) {
    params.validate();
    check_steps(dt, dx);
    if (!(params.alpha > 0.0))
        throw ParameterError("assemble_general_kernels: alpha must be > 0 (use the lkdv variant)");
    if (length == 0)
        throw ParameterError("assemble_general_kernels: length must be >= 1");
    const LaurentSeries W = lambda1_weighted_general(params, dt, length - 1);
    const double b4 = 4.0 * params.alpha / (params.eps * dt);

    Kernels k;
    k.provenance = Provenance::asymptotic;
    k.variant = Variant::general;
    k.order = 2;
    k.ss.resize(length);
    k.ps.resize(length);
    k.su.resize(length);
    k.pu.resize(length);
    for (std::size_t l = 0; l < length; ++l) {
        const cplx lam = W[l];
        const double ss = real_checked(lam * dx, "ss", l);
        // (1 + 1/z) p = 1 - 1/z
        const double pcoef = l == 0 ? 1.0 : (l == 1 ? -1.0 : 0.0);
        const double common = real_checked((b4 * pcoef - lam) * dx, "su", l);
        const double onepx = l <= 1 ? 1.0 : 0.0;
        k.ss[l] = ss;
        k.su[l] = 2.0 * onepx + common;
        k.ps[l] = -onepx + common;
        k.pu[l] = onepx + common;
    }
    k.check();
    return k;
}

} // namespace kdvtbc
