#include "kdvtbc/error.hpp"
#include "kdvtbc/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace kdvtbc::simd {

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);

struct Table {
    Isa isa;
    DotFn dot;
    DotFn dot_reversed;
};

Table table_for(Isa isa) {
    switch (isa) {
#if defined(KDVTBC_HAVE_AVX2)
    case Isa::avx2: return {Isa::avx2, &avx2::dot, &avx2::dot_reversed};
#endif
#if defined(KDVTBC_HAVE_NEON)
    case Isa::neon: return {Isa::neon, &neon::dot, &neon::dot_reversed};
#endif
    default: return {Isa::scalar, &scalar::dot, &scalar::dot_reversed};
    }
}

Isa detect() {
    if (const char* env = std::getenv("KDVTBC_SIMD"); env && std::string(env) == "scalar")
        return Isa::scalar;
    if (supported(Isa::avx2))
        return Isa::avx2;
    if (supported(Isa::neon))
        return Isa::neon;
    return Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

Table active_table() { return table_for(current().load(std::memory_order_relaxed)); }

} // namespace

std::string_view to_string(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    }
    return "?";
}

bool supported(Isa isa) {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(KDVTBC_HAVE_AVX2)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::neon:
#if defined(__aarch64__) && defined(KDVTBC_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Isa active() { return current().load(std::memory_order_relaxed); }

void force(Isa isa) {
    if (!supported(isa))
        throw ParameterError("SIMD variant '" + std::string(to_string(isa)) + "' is not available");
    current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ParameterError("dot: length mismatch");
    return active_table().dot(a.data(), b.data(), a.size());
}

double dot_reversed(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ParameterError("dot_reversed: length mismatch");
    return active_table().dot_reversed(a.data(), b.data(), a.size());
}

} // namespace kdvtbc::simd
