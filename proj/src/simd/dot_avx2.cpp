#include "kdvtbc/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace kdvtbc::simd::avx2 {

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

} // namespace

__attribute__((target("avx2,fma"))) double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

__attribute__((target("avx2,fma"))) double dot_reversed(const double* a, const double* b, std::size_t n) {
    // b is walked backwards in blocks of four and each block lane-reversed
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d b0 = _mm256_permute4x64_pd(_mm256_loadu_pd(b + n - 4 - i), 0x1b);
        const __m256d b1 = _mm256_permute4x64_pd(_mm256_loadu_pd(b + n - 8 - i), 0x1b);
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), b0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), b1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d b0 = _mm256_permute4x64_pd(_mm256_loadu_pd(b + n - 4 - i), 0x1b);
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), b0, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        s += a[i] * b[n - 1 - i];
    return s;
}

} // namespace kdvtbc::simd::avx2
#endif
