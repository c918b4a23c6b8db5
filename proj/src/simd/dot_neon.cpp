#include "kdvtbc/simd.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace kdvtbc::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

double dot_reversed(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t b0 = vextq_f64(vld1q_f64(b + n - 2 - i), vld1q_f64(b + n - 2 - i), 1);
        const float64x2_t b1 = vextq_f64(vld1q_f64(b + n - 4 - i), vld1q_f64(b + n - 4 - i), 1);
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), b0);
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), b1);
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i)
        s += a[i] * b[n - 1 - i];
    return s;
}

} // namespace kdvtbc::simd::neon
#endif
