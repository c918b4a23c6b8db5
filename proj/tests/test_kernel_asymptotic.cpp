#include "support.hpp"

#include "kdvtbc/diagnostics.hpp"
#include "kdvtbc/error.hpp"
#include "kdvtbc/kernel_asymptotic.hpp"
#include "kdvtbc/series.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace kdvtbc;

namespace {

double binom_direct(double g, std::size_t p) {
    double v = 1.0;
    for (std::size_t i = 0; i < p; ++i)
        v *= (g - static_cast<double>(i)) / static_cast<double>(i + 1);
    return v;
}

cplx p_of(cplx z) { return (z - 1.0) / (z + 1.0); }

std::vector<cplx> sample_points() {
    std::vector<cplx> z;
    for (double th : {0.0, 0.7, 1.9, -1.2, 3.0})
        z.push_back(std::polar(2.0, th));
    return z;
}

std::vector<cplx> conv(const LaurentSeries& a, const LaurentSeries& b) {
    std::vector<cplx> out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

/// Direct evaluation of the general cubic L^3 + b2 L^2 + b1 L + b0 at a scalar p.
cplx general_cubic(cplx L, cplx p, const ModelParams& m, double dt) {
    const double ed = m.eps * dt;
    const cplx b2 = -8.0 * m.alpha * p / ed;
    const cplx b1 = m.c / m.eps + 20.0 * m.alpha * m.alpha * p * p / (ed * ed);
    const cplx b0 = (2.0 / ed - 2.0 * m.alpha * m.c / (m.eps * ed)) * p - 16.0 * std::pow(m.alpha, 3) * p * p * p / (ed * ed * ed);
    return ((L + b2) * L + b1) * L + b0;
}

} // namespace

TEST_CASE("binomial coefficients") {
    for (double g : {1.0 / 3, -1.0 / 3, 2.0 / 3, -2.0 / 3, 0.5, -1.0, -2.0, -3.0}) {
        const auto a = binomial_series(g, BinomialSign::minus, 40);
        const auto b = binomial_series(g, BinomialSign::plus, 40);
        CHECK(a.size() == 41);
        CHECK(a[0] == 1.0);
        CHECK(b[0] == 1.0);
        for (std::size_t p = 0; p <= 40; ++p) {
            const double d = binom_direct(g, p);
            CHECK(std::abs(b[p].real() - d) <= 1e-14 * std::max(1.0, std::abs(d)));
            CHECK(std::abs(a[p].real() - (p % 2 ? -d : d)) <= 1e-14 * std::max(1.0, std::abs(d)));
        }
    }
    CHECK(binomial_series(1.0 / 3, BinomialSign::minus, 3)[1].real() == doctest::Approx(-1.0 / 3));
    CHECK(binomial_series(-1.0 / 3, BinomialSign::plus, 3)[1].real() == doctest::Approx(-1.0 / 3));
    const auto geo = binomial_series(-1.0, BinomialSign::plus, 20);
    for (std::size_t p = 0; p <= 20; ++p)
        CHECK(geo[p].real() == (p % 2 ? -1.0 : 1.0));
}

TEST_CASE("binomial series evaluate to the closed form at |z| = 2") {
    for (cplx z : sample_points())
        for (double g : {1.0 / 3, -2.0 / 3, 0.5, -3.0}) {
            CHECK(std::abs(binomial_series(g, BinomialSign::minus, 200).evaluate(z) - std::pow(1.0 - 1.0 / z, g)) < 1e-12);
            CHECK(std::abs(binomial_series(g, BinomialSign::plus, 200).evaluate(z) - std::pow(1.0 + 1.0 / z, g)) < 1e-12);
        }
}

TEST_CASE("lKdV sigma series") {
    const auto s = sigma_series_lkdv(1e-3, 1e-3, 10);
    CHECK(s.sigma1[0].real() == doctest::Approx(-std::cbrt(2.0 / 1e-6)).epsilon(1e-14));
    const auto unit = sigma_series_lkdv(1.0, 2.0, 10);
    CHECK(unit.sigma1[0].real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(unit.sigma2[0].real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unit.sigma1[1].real() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(sigma_series_lkdv(0.0, 1.0, 3), ParameterError);
}

TEST_CASE("lKdV sigma series match direct evaluation at |z| = 2") {
    const double eps = 1e-3, dt = 4e-3;
    const double k = 2.0 / (eps * dt);
    const auto s = sigma_series_lkdv(eps, dt, 200);
    for (cplx z : sample_points()) {
        const cplx p = p_of(z);
        const cplx s1 = -std::cbrt(k) * std::pow(p, 1.0 / 3.0);
        const cplx s2 = std::cbrt(k * k) * std::pow(p, 2.0 / 3.0);
        CHECK(std::abs(s.sigma1.evaluate(z) - s1) <= 1e-8 * std::abs(s1));
        CHECK(std::abs(s.sigma2.evaluate(z) - s2) <= 1e-8 * std::abs(s2));
    }
}

TEST_CASE("lKdV kernel first entries") {
    const Kernels k = assemble_lkdv_kernels({0.0, 0.0, 1.0}, 2.0, 0.1, 10);
    CHECK(k.ss[0] == doctest::Approx(-0.1 + 0.005 + 0.001 / 6.0).epsilon(1e-14));
    CHECK(k.ss[0] == doctest::Approx(-0.0948333).epsilon(1e-6));
    CHECK(k.provenance == Provenance::asymptotic);
    CHECK(k.variant == Variant::lkdv);
    CHECK(k.order == 3);
    // the p sequences cancel at order dx^0
    const Kernels tiny = assemble_lkdv_kernels({0.0, 0.0, 1.0}, 2.0, 1e-12, 10);
    CHECK(std::abs(tiny.ps[0] + tiny.pu[0]) < 1e-10);
    const std::vector<double> ps{-1, -1, 0, 0}, su{2, 2, 0, 0}, pu{1, 1, 0, 0};
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(std::abs(tiny.ss[n]) < 1e-10);
        CHECK(std::abs(tiny.ps[n] - ps[n]) < 1e-10);
        CHECK(std::abs(tiny.su[n] - su[n]) < 1e-10);
        CHECK(std::abs(tiny.pu[n] - pu[n]) < 1e-10);
    }
}

TEST_CASE("lKdV kernels written out term by term") {
    const double eps = 1e-3, dt = 1e-2, dx = 1.0 / 256;
    const auto s = sigma_series_lkdv(eps, dt, 30);
    const Kernels k3 = assemble_lkdv_kernels({0.0, 0.0, eps}, dt, dx, 30, 3);
    const Kernels k2 = assemble_lkdv_kernels({0.0, 0.0, eps}, dt, dx, 30, 2);
    const double K = dx * dx * dx / (3.0 * eps * dt);
    auto s1 = [&](std::size_t p) { return s.sigma1[p].real(); };
    auto s2 = [&](std::size_t p) { return s.sigma2[p].real(); };
    const double tol = 1e-15;
    CHECK(std::abs(k3.ss[0] - (s1(0) * dx + s2(0) * dx * dx / 2 + K)) < tol);
    CHECK(std::abs(k3.ss[1] - ((s1(0) + s1(1)) * dx + (s2(0) + s2(1)) * dx * dx / 2 - K)) < tol);
    CHECK(std::abs(k3.ps[0] - (-1.0 - s1(0) * dx - s2(0) * dx * dx / 2 + 2 * K)) < tol);
    CHECK(std::abs(k3.su[1] - (2.0 - (s1(0) + s1(1)) * dx - (s2(0) + s2(1)) * dx * dx / 2 + K)) < tol);
    CHECK(std::abs(k3.pu[0] - (1.0 - s1(0) * dx + s2(0) * dx * dx / 2 + 2 * K)) < tol);
    for (std::size_t p = 1; p + 1 < 30; ++p) {
        const double a1 = s1(p) + s1(p + 1), a2 = (s2(p) + s2(p + 1)) / 2;
        CHECK(std::abs(k3.ss[p + 1] - (a1 * dx + a2 * dx * dx)) < tol);
        CHECK(std::abs(k3.pu[p + 1] - (-a1 * dx + a2 * dx * dx)) < tol);
        CHECK(k3.ss[p + 1] == k2.ss[p + 1]);
    }
    CHECK(std::abs(k3.ss[0] - k2.ss[0] - K) < tol);
}

TEST_CASE("lKdV assembly validation") {
    CHECK_THROWS_AS(assemble_lkdv_kernels({0.0, 1e-3, 1e-3}, 1e-3, 1e-2, 10), ParameterError);
    CHECK_THROWS_AS(assemble_lkdv_kernels({0.0, 0.0, 1e-3}, 1e-3, 1e-2, 10, 4), ParameterError);
    CHECK_THROWS_AS(assemble_lkdv_kernels({0.0, 0.0, 1e-3}, 1e-3, 1e-2, 0), ParameterError);
    const Kernels k = assemble_lkdv_kernels({1.0, 0.0, 1e-3}, 1e-3, 1e-2, 10);
    REQUIRE(k.warnings.size() == 1);
    CHECK(k.warnings[0].find("ignore c") != std::string::npos);
}

TEST_CASE("general expansion series match direct evaluation at |z| = 2") {
    // Delta vanishes at |1/z| = 0.88 here, so every series converges at |z| = 2
    const ModelParams m{2.0, 1e-3, 1e-3};
    const double dt = 1e-3, ed = m.eps * dt;
    const GeneralExpansion g = general_expansion(m, dt, 250);
    for (cplx z : sample_points()) {
        const cplx p = p_of(z);
        const cplx P = m.c / m.eps - 4.0 * m.alpha * m.alpha * p * p / (3.0 * ed * ed);
        const cplx Q = (2.0 * m.alpha * m.c / (3.0 * m.eps * ed) + 2.0 / ed) * p -
                       16.0 * std::pow(m.alpha, 3) / (27.0 * ed * ed * ed) * p * p * p;
        const cplx Delta = Q * Q + 4.0 * P * P * P / 27.0;
        CHECK(std::abs(g.P.evaluate(z) - P) <= 1e-12 * std::abs(P));
        CHECK(std::abs(g.Q.evaluate(z) - Q) <= 1e-10 * std::abs(Q));
        CHECK(std::abs(g.Delta.evaluate(z) - Delta) <= 1e-9 * std::abs(Delta));
        const cplx delta = g.delta.evaluate(z);
        CHECK(std::abs(delta * delta - Delta) <= 1e-7 * std::abs(Delta));
        const cplx zeta = g.zeta.evaluate(z);
        CHECK(std::abs(zeta - (delta - Q) / 2.0) <= 1e-7 * std::abs(zeta));
        const cplx mp = g.mu_plus.evaluate(z), mm = g.mu_minus.evaluate(z);
        CHECK(std::abs(mp * mp * mp - zeta) <= 1e-7 * std::abs(zeta));
        CHECK(std::abs(mp * mm - 1.0) <= 1e-7);
        const cplx L = g.lambda1.evaluate(z);
        CHECK(std::abs(L - (8.0 * m.alpha * p / (3.0 * ed) + mp - P * mm / 3.0)) <= 1e-7 * std::abs(L));
        CHECK(std::abs(general_cubic(L, p, m, dt)) <= 1e-7 * std::pow(std::abs(L), 3));
    }
}

TEST_CASE("implicit lambda1 series matches the scalar root at |z| = 2") {
    for (const ModelParams& m : {ModelParams{2.0, 1e-3, 1e-3}, ModelParams{0.0, 1e-3, 1e-3}, ModelParams{1.0, 0.5, 1.0}})
        for (double dt : {1e-3, 1e-2, 1.0}) {
            const LaurentSeries L = lambda1_cubic_general(m, dt, 300);
            for (cplx z : sample_points()) {
                const cplx v = L.evaluate(z);
                CHECK(std::abs(general_cubic(v, p_of(z), m, dt)) <= 1e-7 * std::pow(std::abs(v), 3));
                // the physical root lambda = L - 2 alpha p/(eps dt) is the stable one
                CHECK((v - 2.0 * m.alpha * p_of(z) / (m.eps * dt)).real() < 0.0);
            }
        }
}

TEST_CASE("Cardano and implicit routes give the same lambda1 series") {
    auto compare = [](const ModelParams& m, double dt, std::size_t n) {
        const LaurentSeries a = general_expansion(m, dt, n).lambda1;
        const LaurentSeries b = lambda1_cubic_general(m, dt, n);
        double scale = 0.0;
        for (std::size_t l = 0; l <= n; ++l)
            scale = std::max(scale, std::abs(b[l]));
        for (std::size_t l = 0; l <= n; ++l)
            CHECK_MESSAGE(std::abs(a[l] - b[l]) <= 1e-8 * scale, "l=", l, " c=", m.c, " alpha=", m.alpha,
                          " eps=", m.eps, " dt=", dt);
    };
    // the Cardano intermediates lose accuracy with l (zeros of Delta, the pole of p)
    compare({2.0, 1e-3, 1e-3}, 1e-3, 12);
    // random parameters can put that zero much closer to the origin
    for (int trial = 0; trial < 20; ++trial)
        compare({testing::uniform(-3.0, 3.0), testing::log_uniform(-4.0, -2.0), testing::log_uniform(-4.0, -2.0)},
                testing::log_uniform(-3.0, -1.0), 4);
}

TEST_CASE("weighted and plain lambda1 series are related by (1 + 1/z)") {
    const ModelParams m{2.0, 1e-3, 1e-3};
    const LaurentSeries W = lambda1_weighted_general(m, 1e-3, 200);
    const LaurentSeries L = lambda1_cubic_general(m, 1e-3, 200);
    CHECK(W[0] == L[0]);
    for (std::size_t l = 1; l <= 200; ++l)
        CHECK(std::abs(W[l] - (L[l] + L[l - 1])) <= 1e-9 * std::abs(L[l]));
}

TEST_CASE("lambda1 at l = 0 for alpha = c = 0, eps dt = 2") {
    const ModelParams m{0.0, 0.0, 1.0};
    CHECK(std::abs(lambda1_cubic_general(m, 2.0, 5)[0] - -1.0) < 1e-14);
    CHECK(std::abs(general_expansion(m, 2.0, 5).lambda1[0] - -1.0) < 1e-14);
    // the alpha = 0, c = 0 cubic is L^3 + 2p/(eps dt) = 0
    const LaurentSeries L = lambda1_cubic_general(m, 2.0, 40);
    const auto s = sigma_series_lkdv(1.0, 2.0, 40);
    for (std::size_t l = 0; l <= 40; ++l)
        CHECK(std::abs(L[l] - s.sigma1[l]) < 1e-12);
}

TEST_CASE("lambda1 series solves the cubic coefficient-wise") {
    for (const ModelParams& m : {ModelParams{1.0, 0.5, 1.0}, ModelParams{-0.5, 0.2, 0.7}, ModelParams{0.0, 1.0, 2.0}}) {
        const double dt = 1.0, ed = m.eps * dt;
        const std::size_t N = 50;
        const LaurentSeries L = lambda1_cubic_general(m, dt, N);
        const LaurentSeries p = series::moebius_p(N + 1);
        const LaurentSeries p2{conv(p, p)}, p3{conv(p2, p)};
        const LaurentSeries L2{conv(L, L)}, L3{conv(L2, L)};
        const auto b2L2 = conv(p, L2);
        const auto p2L = conv(p2, L);
        for (std::size_t l = 0; l <= N; ++l) {
            const cplx r = L3[l] - 8.0 * m.alpha / ed * b2L2[l] + m.c / m.eps * L[l] +
                           20.0 * m.alpha * m.alpha / (ed * ed) * p2L[l] +
                           (2.0 / ed - 2.0 * m.alpha * m.c / (m.eps * ed)) * p[l] -
                           16.0 * std::pow(m.alpha, 3) / (ed * ed * ed) * p3[l];
            CHECK(std::abs(r) <= 1e-9);
        }
    }
}

TEST_CASE("general kernel structure") {
    const ModelParams m{2.0, 1e-3, 1e-3};
    const double dt = 1e-3, dx = 1.0 / 512;
    const Kernels k = assemble_general_kernels(m, dt, dx, 100);
    CHECK(k.variant == Variant::general);
    CHECK(k.provenance == Provenance::asymptotic);
    const LaurentSeries L = lambda1_cubic_general(m, dt, 99);
    for (std::size_t l = 1; l < 100; ++l)
        CHECK(std::abs(k.ss[l] / dx - (L[l] + L[l - 1]).real()) <= 1e-9 * std::abs(k.ss[l] / dx));
    // constant parts in the dx -> 0 limit
    const Kernels tiny = assemble_general_kernels(m, dt, 1e-14, 6);
    const std::vector<double> ps{-1, -1, 0, 0, 0, 0}, su{2, 2, 0, 0, 0, 0}, pu{1, 1, 0, 0, 0, 0};
    for (std::size_t n = 0; n < 6; ++n) {
        CHECK(std::abs(tiny.ss[n]) < 1e-7);
        CHECK(std::abs(tiny.ps[n] - ps[n]) < 1e-7);
        CHECK(std::abs(tiny.su[n] - su[n]) < 1e-7);
        CHECK(std::abs(tiny.pu[n] - pu[n]) < 1e-7);
    }
}

TEST_CASE("general kernels approach lKdV kernels as alpha -> 0") {
    const double eps = 1.0, dt = 2.0, dx = 1.0 / 1024;
    const Kernels g = assemble_general_kernels({0.0, 1e-8, eps}, dt, dx, 51);
    const Kernels l = assemble_lkdv_kernels({0.0, 0.0, eps}, dt, dx, 51);
    for (std::size_t n = 0; n <= 50; ++n) {
        CHECK(std::abs(g.ss[n] - l.ss[n]) <= 1e-4);
        CHECK(std::abs(g.ps[n] - l.ps[n]) <= 1e-4);
        CHECK(std::abs(g.su[n] - l.su[n]) <= 1e-4);
        CHECK(std::abs(g.pu[n] - l.pu[n]) <= 1e-4);
    }
}

TEST_CASE("general assembly validation") {
    CHECK_THROWS_AS(assemble_general_kernels({0.0, 0.0, 1e-3}, 1e-3, 1e-2, 10), ParameterError);
    CHECK_THROWS_AS(assemble_general_kernels({0.0, 1e-3, 1e-3}, 1e-3, 1e-2, 0), ParameterError);
    CHECK_THROWS_AS(general_expansion({0.0, 1e-3, 1e-3}, 0.0, 10), ParameterError);
}

TEST_CASE("asymptotic kernels decay like n^-3/2") {
    const Kernels l = assemble_lkdv_kernels({0.0, 0.0, 1e-3}, 0.1, 1.0 / 1024, 1001);
    const SlopeFit fl = decay_fit(l.ss, 10, 1000);
    CHECK(fl.slope >= -1.7);
    CHECK(fl.slope <= -1.3);
    // for small eps dt / alpha the tail sets in only beyond n = 1000
    for (double c : {0.0, 2.0}) {
        const Kernels g = assemble_general_kernels({c, 1e-3, 1e-3}, 1e-2, 1.0 / 1024, 1001);
        const SlopeFit fg = decay_fit(g.ss, 10, 1000);
        CHECK(fg.slope >= -1.7);
        CHECK(fg.slope <= -1.3);
    }
}

TEST_CASE("series power recurrence") {
    // (1 + 1/z)^(1/2) squared
    const LaurentSeries g = series::one_plus_x(30);
    const LaurentSeries h = series::power(g, 0.5, 1.0);
    const LaurentSeries b = binomial_series(0.5, BinomialSign::plus, 29);
    for (std::size_t l = 0; l < 30; ++l)
        CHECK(std::abs(h[l] - b[l]) < 1e-14);
    CHECK_THROWS_AS(series::power(series::constant(0.0, 4), 0.5, 0.0), NumericalError);
}
