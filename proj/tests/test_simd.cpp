#include "support.hpp"

#include "kdvtbc/error.hpp"
#include "kdvtbc/simd.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace kdvtbc;

namespace {

struct Pair {
    std::vector<double> a, b;
};

Pair random_pair(std::size_t n) {
    Pair p{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        p.a[i] = testing::uniform(-1.0, 1.0) * testing::log_uniform(-3.0, 3.0);
        p.b[i] = testing::uniform(-1.0, 1.0);
    }
    return p;
}

double abs_mass(const Pair& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.a.size(); ++i)
        s += std::abs(p.a[i] * p.b[i]) + std::abs(p.a[i] * p.b[p.a.size() - 1 - i]);
    return s;
}

std::vector<std::size_t> lengths() {
    std::vector<std::size_t> n;
    for (std::size_t i = 0; i <= 67; ++i)
        n.push_back(i);
    n.push_back(1000);
    n.push_back(4099);
    return n;
}

} // namespace

TEST_CASE("scalar dot products on small hand cases") {
    const double a[] = {1, 2, 3};
    const double b[] = {4, 5, 6};
    CHECK(simd::scalar::dot(a, b, 3) == 32.0);
    CHECK(simd::scalar::dot_reversed(a, b, 3) == 1 * 6 + 2 * 5 + 3 * 4);
    CHECK(simd::scalar::dot(a, b, 0) == 0.0);
}

TEST_CASE("dispatched dot rejects length mismatch") {
    std::vector<double> a(3), b(4);
    CHECK_THROWS_AS(simd::dot(a, b), ParameterError);
    CHECK_THROWS_AS(simd::dot_reversed(a, b), ParameterError);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 matches scalar reference") {
    if (!simd::supported(simd::Isa::avx2)) {
        MESSAGE("AVX2 not available, skipped");
        return;
    }
    for (std::size_t n : lengths()) {
        const Pair p = random_pair(n);
        const double tol = 1e-14 * abs_mass(p) + 1e-300;
        CHECK(std::abs(simd::avx2::dot(p.a.data(), p.b.data(), n) - simd::scalar::dot(p.a.data(), p.b.data(), n)) <= tol);
        CHECK(std::abs(simd::avx2::dot_reversed(p.a.data(), p.b.data(), n) -
                       simd::scalar::dot_reversed(p.a.data(), p.b.data(), n)) <= tol);
    }
}

TEST_CASE("neon is unavailable on x86") { CHECK_THROWS_AS(simd::force(simd::Isa::neon), ParameterError); }
#endif

#if defined(__aarch64__)
TEST_CASE("neon matches scalar reference") {
    for (std::size_t n : lengths()) {
        const Pair p = random_pair(n);
        const double tol = 1e-14 * abs_mass(p) + 1e-300;
        CHECK(std::abs(simd::neon::dot(p.a.data(), p.b.data(), n) - simd::scalar::dot(p.a.data(), p.b.data(), n)) <= tol);
        CHECK(std::abs(simd::neon::dot_reversed(p.a.data(), p.b.data(), n) -
                       simd::scalar::dot_reversed(p.a.data(), p.b.data(), n)) <= tol);
    }
}
#endif

TEST_CASE("forcing each supported variant gives consistent dispatched results") {
    const simd::Isa before = simd::active();
    const Pair p = random_pair(257);
    const double ref = simd::scalar::dot_reversed(p.a.data(), p.b.data(), p.a.size());
    for (simd::Isa isa : {simd::Isa::scalar, simd::Isa::avx2, simd::Isa::neon}) {
        if (!simd::supported(isa))
            continue;
        simd::force(isa);
        CHECK(simd::active() == isa);
        CHECK(std::abs(simd::dot_reversed(p.a, p.b) - ref) <= 1e-14 * abs_mass(p));
    }
    simd::force(before);
}
