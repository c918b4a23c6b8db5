#include "kdvtbc/kernel_exact.hpp"

#include "kdvtbc/error.hpp"
#include "kdvtbc/format.hpp"
#include "kdvtbc/simd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace kdvtbc {

namespace {

constexpr double sep_margin = 1e-12;
constexpr double cond_warn = 1e12;

using Coeffs = std::array<cplx, 5>; // ascending powers

Coeffs quartic_coeffs(cplx p, const SchemeRatios& r) {
    const double a = r.a, mu = r.mu;
    return {cplx(-1.0), (2.0 - a) - mu * p, (4.0 / r.lambda_D + 2.0 * mu) * p, -((2.0 - a) + mu * p), cplx(1.0)};
}

cplx horner(const Coeffs& c, cplx x) {
    cplx v = c[4];
    for (int k = 3; k >= 0; --k)
        v = v * x + c[static_cast<std::size_t>(k)];
    return v;
}

cplx horner_deriv(const Coeffs& c, cplx x) {
    cplx v = 4.0 * c[4];
    for (int k = 3; k >= 1; --k)
        v = v * x + static_cast<double>(k) * c[static_cast<std::size_t>(k)];
    return v;
}

double scale(const Coeffs& c, cplx x) {
    double s = 0.0, xp = 1.0;
    for (const auto& ck : c) {
        s += std::abs(ck) * xp;
        xp *= std::abs(x);
    }
    return s;
}

} // namespace

QuarticRoots quartic_roots_at_p(cplx p, const SchemeRatios& ratios) {
    if (!(p.real() > 0.0))
        throw ParameterError("quartic_roots_at: Re p must be > 0 (|z| > 1)");
    const Coeffs c = quartic_coeffs(p, ratios);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int i = 1; i < 4; ++i)
        m(i, i - 1) = 1.0;
    for (int i = 0; i < 4; ++i)
        m(i, 3) = -c[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m, false);
    if (es.info() != Eigen::Success)
        throw NumericalError("quartic_roots_at: eigensolver failed");

    QuarticRoots out;
    out.p = p;
    for (int k = 0; k < 4; ++k) {
        cplx x = es.eigenvalues()[k];
        for (int it = 0; it < 2; ++it) {
            const cplx d = horner_deriv(c, x);
            if (d == 0.0)
                break;
            const cplx y = x - horner(c, x) / d;
            if (std::abs(horner(c, y)) > std::abs(horner(c, x)))
                break;
            x = y;
        }
        if (std::abs(horner(c, x)) > 1e-10 * scale(c, x))
            throw NumericalError("quartic_roots_at: root residual above 1e-10");
        out.r[static_cast<std::size_t>(k)] = x;
    }
    std::sort(out.r.begin(), out.r.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });

    if (std::abs(out.r[1]) >= 1.0 - sep_margin || std::abs(out.r[2]) <= 1.0 + sep_margin)
        throw NumericalError("quartic_roots_at: roots not separated by the unit circle (|r2| = " +
                             format_double(std::abs(out.r[1])) + ", |r3| = " + format_double(std::abs(out.r[2])) +
                             ")");
    const cplx prod = out.r[0] * out.r[1] * out.r[2] * out.r[3];
    if (std::abs(prod + 1.0) > 1e-10)
        throw NumericalError("quartic_roots_at: root product differs from -1");
    return out;
}

QuarticRoots quartic_roots_at(cplx z, const SchemeRatios& ratios) {
    if (!(std::abs(z) > 1.0))
        throw ParameterError("quartic_roots_at: |z| must be > 1");
    return quartic_roots_at_p((z - 1.0) / (z + 1.0), ratios);
}

SigmaSequences sigma_sequences(const SchemeRatios& r) {
    const double a = r.a, mu = r.mu, c0 = r.c_zero();
    SigmaSequences s{};
    s.s1[0] = 2.0 - a + mu;
    s.s1[1] = 2.0 - a - mu;
    s.s2[0] = c0;
    s.s2[1] = 0.0;
    s.s2[2] = -c0;
    s.s3[0] = -(2.0 - a - mu);
    s.s3[1] = -2.0 * (2.0 - a);
    s.s3[2] = -(2.0 - a + mu);
    s.s4[0] = -1.0;
    s.s4[1] = -2.0;
    s.s4[2] = -1.0;
    return s;
}

InitialCoefficients init_kernels(const SchemeRatios& ratios) {
    const QuarticRoots q = quartic_roots_at_p(cplx(1.0), ratios);
    const cplx ss = q.r[0] + q.r[1], ps = q.r[0] * q.r[1];
    const cplx su = q.r[2] + q.r[3], pu = q.r[2] * q.r[3];
    for (cplx v : {ss, ps, su, pu})
        if (std::abs(v.imag()) > 1e-10)
            throw NumericalError("init_kernels: index-0 coefficient has imaginary part " + format_double(v.imag()));
    InitialCoefficients ic{ss.real(), ps.real(), su.real(), pu.real(), 0.0};
    const SigmaSequences s = sigma_sequences(ratios);
    const double res[4] = {
        ic.ss0 + ic.su0 - s.s1[0],
        ic.ss0 * ic.su0 + ic.ps0 + ic.pu0 - s.s2[0],
        ic.ss0 * ic.pu0 + ic.ps0 * ic.su0 - s.s3[0],
        ic.ps0 * ic.pu0 - s.s4[0],
    };
    for (double v : res)
        ic.sys0_residual = std::max(ic.sys0_residual, std::abs(v));
    return ic;
}

double recurrence_condition(const SchemeRatios& ratios) {
    const InitialCoefficients ic = init_kernels(ratios);
    Eigen::Matrix4d m;
    m << 1.0, 0.0, 1.0, 0.0,
         ic.su0, 1.0, ic.ss0, 1.0,
         ic.pu0, ic.su0, ic.ps0, ic.ss0,
         0.0, ic.pu0, 0.0, ic.ps0;
    const Eigen::PartialPivLU<Eigen::Matrix4d> lu(m);
    const double det = m.determinant();
    if (det == 0.0 || !std::isfinite(det))
        return std::numeric_limits<double>::infinity();
    return m.cwiseAbs().colwise().sum().maxCoeff() * lu.inverse().cwiseAbs().colwise().sum().maxCoeff();
}

Kernels start_exact_kernels(const SchemeRatios& ratios) {
    const InitialCoefficients ic = init_kernels(ratios);
    Kernels k;
    k.provenance = Provenance::exact;
    k.ss = {ic.ss0};
    k.ps = {ic.ps0};
    k.su = {ic.su0};
    k.pu = {ic.pu0};
    k.sys0_residual = ic.sys0_residual;
    return k;
}

void extend_kernels(Kernels& k, const SchemeRatios& ratios) {
    const std::size_t n = k.size();
    if (n == 0)
        throw ParameterError("extend_kernels: index 0 missing");
    if (k.provenance != Provenance::exact)
        throw ParameterError("extend_kernels: only exact kernels follow the recurrence");

    const double ss0 = k.ss[0], ps0 = k.ps[0], su0 = k.su[0], pu0 = k.pu[0];
    Eigen::Matrix4d m;
    m << 1.0, 0.0, 1.0, 0.0,
         su0, 1.0, ss0, 1.0,
         pu0, su0, ps0, ss0,
         0.0, pu0, 0.0, ps0;

    // history sums over k = 1..n-1
    const std::size_t h = n - 1;
    double h_sssu = 0.0, h_sspu = 0.0, h_pssu = 0.0, h_pspu = 0.0;
    if (h > 0) {
        const std::span<const double> ss(k.ss.data() + 1, h), ps(k.ps.data() + 1, h);
        const std::span<const double> su(k.su.data() + 1, h), pu(k.pu.data() + 1, h);
        h_sssu = simd::dot_reversed(ss, su);
        h_sspu = simd::dot_reversed(ss, pu);
        h_pssu = simd::dot_reversed(ps, su);
        h_pspu = simd::dot_reversed(ps, pu);
    }
    const SigmaSequences s = sigma_sequences(ratios);
    Eigen::Vector4d rhs;
    rhs << s.sigma1(n),
           s.sigma2(n) - k.pu[n - 1] - k.ps[n - 1] - h_sssu,
           s.sigma3(n) - h_sspu - h_pssu,
           s.sigma4(n) - h_pspu;

    const Eigen::PartialPivLU<Eigen::Matrix4d> lu(m);
    Eigen::Vector4d x = lu.solve(rhs);
    x += lu.solve(rhs - m * x);

    double cond = std::numeric_limits<double>::infinity();
    const double det = m.determinant();
    if (det != 0.0 && std::isfinite(det)) {
        const Eigen::Matrix4d inv = lu.inverse();
        cond = m.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
    }
    if (!std::isfinite(cond) || !x.allFinite())
        throw NumericalError("extend_kernels: recurrence matrix is singular at index " + std::to_string(n) +
                             "; use asymptotic kernels");
    if (cond > cond_warn && std::none_of(k.warnings.begin(), k.warnings.end(),
                                         [](const std::string& w) { return w.rfind("ill-conditioned", 0) == 0; }))
        k.warnings.push_back("ill-conditioned recurrence (condition estimate " + format_double(cond) +
                             " > 1e12); asymptotic kernels advised");

    k.ss.push_back(x(0));
    k.ps.push_back(x(1));
    k.su.push_back(x(2));
    k.pu.push_back(x(3));
    k.cond_log.push_back(cond);
}

void extend_kernels_to(Kernels& k, const SchemeRatios& ratios, std::size_t length) {
    while (k.size() < length)
        extend_kernels(k, ratios);
}

Kernels generate_exact_kernels(const SchemeRatios& ratios, std::size_t length) {
    Kernels k = start_exact_kernels(ratios);
    extend_kernels_to(k, ratios, length);
    k.truncate(std::max<std::size_t>(length, 1));
    return k;
}

} // namespace kdvtbc
