#include "support.hpp"

#include "kdvtbc/diagnostics.hpp"
#include "kdvtbc/error.hpp"
#include "kdvtbc/kernel_exact.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace kdvtbc;

namespace {

/// Durand-Kerner iteration on the monic quartic with ascending coefficients c.
std::array<cplx, 4> durand_kerner(const std::array<cplx, 5>& c) {
    auto f = [&](cplx x) { return (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]; };
    std::array<cplx, 4> r;
    const cplx seed(0.4, 0.9);
    r[0] = 1.0;
    for (std::size_t i = 1; i < 4; ++i)
        r[i] = r[i - 1] * seed;
    for (int it = 0; it < 2000; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            cplx den = 1.0;
            for (std::size_t j = 0; j < 4; ++j)
                if (j != i)
                    den *= r[i] - r[j];
            const cplx step = f(r[i]) / den;
            r[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15)
            break;
    }
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    return r;
}

std::array<cplx, 5> quartic(cplx p, const SchemeRatios& r) {
    return {-1.0, (2.0 - r.a) - r.mu * p, (4.0 / r.lambda_D + 2.0 * r.mu) * p, -((2.0 - r.a) + r.mu * p), 1.0};
}

SchemeRatios ratios_for(const ModelParams& p, double dx, double dt) {
    return derive_ratios(p, Grid::make(0.0, 1.0, dx, dt, 1));
}

double conv(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
        s += a[k] * b[n - k];
    return s;
}

/// Largest deviation of the four functional equations over indices 0..len-1.
double functional_residual(const Kernels& k, const SchemeRatios& r) {
    const SigmaSequences s = sigma_sequences(r);
    double worst = 0.0;
    for (std::size_t n = 0; n < k.size(); ++n) {
        const double prev = n ? k.ps[n - 1] + k.pu[n - 1] : 0.0;
        const double e1 = k.ss[n] + k.su[n] - s.sigma1(n);
        const double e2 = conv(k.ss, k.su, n) + k.ps[n] + k.pu[n] + prev - s.sigma2(n);
        const double e3 = conv(k.ss, k.pu, n) + conv(k.ps, k.su, n) - s.sigma3(n);
        const double e4 = conv(k.ps, k.pu, n) - s.sigma4(n);
        worst = std::max({worst, std::abs(e1), std::abs(e2), std::abs(e3), std::abs(e4)});
    }
    return worst;
}

cplx laurent(const std::vector<double>& c, cplx z) {
    cplx v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;)
        v = v / z + c[i];
    return v;
}

const ModelParams case3{2.0, 1e-3, 1e-3};

} // namespace

TEST_CASE("quartic at z = infinity with lambda_D = 4, a = mu = 0") {
    SchemeRatios r;
    r.lambda_D = 4.0;
    const auto q = quartic_roots_at_p(1.0, r);
    const auto dk = durand_kerner(quartic(1.0, r));
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(q.r[i] - dk[i]) < 1e-10);
    CHECK(std::abs(q.r[1]) < 1.0);
    CHECK(std::abs(q.r[2]) > 1.0);
    CHECK(std::abs(q.r[0] * q.r[1] * q.r[2] * q.r[3] + 1.0) < 1e-12);
}

TEST_CASE("quartic roots at random |z| = 1.5 match an independent root finder") {
    const SchemeRatios r = ratios_for(case3, 1e-2, 1e-3);
    for (int trial = 0; trial < 1000; ++trial) {
        const cplx z = std::polar(1.5, testing::uniform(-std::numbers::pi, std::numbers::pi));
        const auto q = quartic_roots_at(z, r);
        const auto dk = durand_kerner(quartic((z - 1.0) / (z + 1.0), r));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(q.r[i] - dk[i]) <= 1e-9 * std::max(1.0, std::abs(dk[i])));
        CHECK(std::abs(q.r[1]) < 1.0 - 1e-12);
        CHECK(std::abs(q.r[2]) > 1.0 + 1e-12);
        CHECK(std::abs(q.r[0] * q.r[1] * q.r[2] * q.r[3] + 1.0) <= 1e-10);
    }
}

TEST_CASE("quartic input validation") {
    const SchemeRatios r = ratios_for(case3, 1e-2, 1e-3);
    CHECK_THROWS_AS(quartic_roots_at(cplx(0.5, 0.0), r), ParameterError);
    CHECK_THROWS_AS(quartic_roots_at(cplx(0.0, 1.0), r), ParameterError);
}

TEST_CASE("index-0 coefficients") {
    for (int trial = 0; trial < 50; ++trial) {
        const SchemeRatios r = testing::random_ratios();
        const InitialCoefficients ic = init_kernels(r);
        CHECK(ic.ps0 * ic.pu0 == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(std::abs(ic.ss0 + ic.su0 - (2.0 - r.a + r.mu)) <= 1e-10 * (1.0 + std::abs(2.0 - r.a + r.mu)));
        CHECK(ic.sys0_residual <= 1e-8 * (1.0 + r.c_zero() + r.mu + std::abs(r.a)));
    }
}

TEST_CASE("index-0 coefficients approach (0, -1, 2, 1) in the lKdV regime") {
    const ModelParams p{0.0, 0.0, 1e-3};
    double prev = 1e300;
    for (double dx : {1.0 / 64, 1.0 / 256, 1.0 / 1024, 1.0 / 4096}) {
        const InitialCoefficients ic = init_kernels(ratios_for(p, dx, 1e-3));
        const double dist = std::max({std::abs(ic.ss0), std::abs(ic.ps0 + 1.0), std::abs(ic.su0 - 2.0),
                                      std::abs(ic.pu0 - 1.0)});
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("recurrence reproduces all four functional equations") {
    for (int trial = 0; trial < 20; ++trial) {
        const SchemeRatios r = testing::random_ratios();
        const Kernels k = generate_exact_kernels(r, 501);
        CHECK(k.size() == 501);
        CHECK(k.cond_log.size() == 500);
        const double scale = std::max({1.0, r.c_zero(), r.mu, std::abs(r.a)});
        CHECK(functional_residual(k, r) <= 1e-9 * scale);
        for (std::size_t n = 2; n < k.size(); ++n)
            CHECK(std::abs(k.ss[n] + k.su[n]) <= 1e-12 * scale);
        // product of the p sequences is -(1 + x)^2
        for (std::size_t n = 0; n < k.size(); ++n) {
            const double expect = n == 0 ? -1.0 : n == 1 ? -2.0 : n == 2 ? -1.0 : 0.0;
            CHECK(std::abs(conv(k.ps, k.pu, n) - expect) <= 1e-9);
        }
    }
}

TEST_CASE("truncated Laurent sums match root evaluation at |z| = 2") {
    for (int trial = 0; trial < 10; ++trial) {
        const SchemeRatios r = trial < 5 ? ratios_for(case3, 1e-2, 1e-3) : ratios_for({0.0, 0.0, 1e-3}, 1.0 / 128, 1e-3);
        const Kernels k = generate_exact_kernels(r, 80);
        const cplx z = std::polar(2.0, testing::uniform(-3.1, 3.1));
        const auto dk = durand_kerner(quartic((z - 1.0) / (z + 1.0), r));
        const cplx f = 1.0 + 1.0 / z;
        CHECK(std::abs(laurent(k.ss, z) - f * (dk[0] + dk[1])) <= 1e-6);
        CHECK(std::abs(laurent(k.ps, z) - f * (dk[0] * dk[1])) <= 1e-6);
        CHECK(std::abs(laurent(k.su, z) - f * (dk[2] + dk[3])) <= 1e-6);
        CHECK(std::abs(laurent(k.pu, z) - f * (dk[2] * dk[3])) <= 1e-6);
    }
}

TEST_CASE("coefficients agree with a contour-integral inverse Z-transform") {
    // c_n = (R^n / M) sum_m f(R e^{i t_m}) e^{i n t_m}
    const SchemeRatios r = ratios_for(case3, 1.0 / 64, 1e-3);
    const Kernels k = generate_exact_kernels(r, 30);
    const double R = 1.5;
    const int M = 512;
    std::array<std::vector<cplx>, 4> samples;
    for (int m = 0; m < M; ++m) {
        const cplx z = std::polar(R, 2.0 * std::numbers::pi * m / M);
        const auto q = durand_kerner(quartic((z - 1.0) / (z + 1.0), r));
        const cplx f = 1.0 + 1.0 / z;
        samples[0].push_back(f * (q[0] + q[1]));
        samples[1].push_back(f * (q[0] * q[1]));
        samples[2].push_back(f * (q[2] + q[3]));
        samples[3].push_back(f * (q[2] * q[3]));
    }
    const std::array<const std::vector<double>*, 4> seqs{&k.ss, &k.ps, &k.su, &k.pu};
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t n = 0; n < 30; ++n) {
            cplx c = 0.0;
            for (int m = 0; m < M; ++m)
                c += samples[s][static_cast<std::size_t>(m)] * std::polar(1.0, 2.0 * std::numbers::pi * m * n / M);
            c *= std::pow(R, static_cast<double>(n)) / M;
            CHECK(std::abs(c.imag()) < 1e-8);
            CHECK(std::abs(c.real() - (*seqs[s])[n]) < 1e-8);
        }
}

TEST_CASE("exact kernel decay for alpha = eps = 1e-3, c = 2, dt = 1e-4, dx = 2^-10") {
    const Kernels k = generate_exact_kernels(ratios_for(case3, 1.0 / 1024, 1e-4), 1001);
    const SlopeFit fit = decay_fit(k.ss, 10, 1000);
    CHECK(fit.slope >= -1.7);
    CHECK(fit.slope <= -1.3);
}

TEST_CASE("near-singular and singular recurrence matrices") {
    const SchemeRatios r = ratios_for(case3, 1e-2, 1e-3);
    // columns for ss and su coincide when ss0 = su0 and ps0 = pu0
    Kernels k;
    k.ss = {1.0 + 1e-14};
    k.su = {1.0};
    k.ps = {0.5};
    k.pu = {0.5};
    extend_kernels(k, r);
    extend_kernels(k, r);
    REQUIRE(k.warnings.size() == 1);
    CHECK(k.warnings[0].find("ill-conditioned") == 0);
    CHECK(k.cond_log[0] > 1e12);

    Kernels singular;
    singular.ss = singular.su = {1.0};
    singular.ps = singular.pu = {0.5};
    try {
        extend_kernels(singular, r);
        FAIL("expected an error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("asymptotic") != std::string::npos);
    }
    CHECK(generate_exact_kernels(r, 20).warnings.empty());
}

TEST_CASE("extension and truncation") {
    const SchemeRatios r = ratios_for(case3, 1e-2, 1e-3);
    Kernels k = start_exact_kernels(r);
    CHECK(k.size() == 1);
    extend_kernels_to(k, r, 40);
    const Kernels direct = generate_exact_kernels(r, 40);
    CHECK(k.ss == direct.ss);
    CHECK(k.pu == direct.pu);
    k.truncate(10);
    CHECK(k.size() == 10);
    CHECK(k.cond_log.size() == 9);
    Kernels a = k;
    a.provenance = Provenance::asymptotic;
    CHECK_THROWS_AS(extend_kernels(a, r), ParameterError);
}

TEST_CASE("kernel CSV round trip is exact") {
    const Kernels k = generate_exact_kernels(ratios_for(case3, 1.0 / 128, 1e-3), 64);
    std::stringstream ss;
    write_kernels_csv(ss, k);
    const std::string text = ss.str();
    CHECK(text.rfind("n,ss,ps,su,pu,provenance\n", 0) == 0);
    const Kernels back = read_kernels_csv(ss);
    CHECK(back.ss == k.ss);
    CHECK(back.ps == k.ps);
    CHECK(back.su == k.su);
    CHECK(back.pu == k.pu);
    CHECK(back.provenance == Provenance::exact);
    std::stringstream bad("n,a,b\n0,1,2\n");
    CHECK_THROWS_AS(read_kernels_csv(bad), ParameterError);
}
