#include "kdvtbc/simd.hpp"

namespace kdvtbc::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

double dot_reversed(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i] * b[n - 1 - i];
    return s;
}

} // namespace kdvtbc::simd::scalar
