#pragma once

#include <span>
#include <string_view>

// Dot products used by the boundary convolutions and the kernel recurrence.
// A scalar reference is always built; AVX2 (x86-64) and NEON (aarch64)
// variants are picked at runtime. KDVTBC_SIMD=scalar in the environment
// forces the reference path.

namespace kdvtbc::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

bool supported(Isa isa);
Isa active();
/// Throws ParameterError when the ISA is unavailable on this CPU or build.
void force(Isa isa);

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);
/// sum_i a[i] * b[n-1-i]
double dot_reversed(std::span<const double> a, std::span<const double> b);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot_reversed(const double* a, const double* b, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double dot_reversed(const double* a, const double* b, std::size_t n);
} // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double dot_reversed(const double* a, const double* b, std::size_t n);
} // namespace neon
#endif

} // namespace kdvtbc::simd
