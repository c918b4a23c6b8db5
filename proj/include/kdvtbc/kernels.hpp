#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kdvtbc {

enum class Provenance { exact, asymptotic };
enum class Variant { none, lkdv, general };

std::string_view to_string(Provenance p);
std::string_view to_string(Variant v);

/// Boundary convolution weights: coefficients of the stable (ss, ps) and
/// unstable (su, pu) root pair symbols, each multiplied by (1 + 1/z).
struct Kernels {
    std::vector<double> ss, ps, su, pu;
    Provenance provenance = Provenance::exact;
    Variant variant = Variant::none;
    /// Truncation order in dx for asymptotic kernels, 0 for exact ones.
    int order = 0;
    /// Condition estimate of the 4x4 recurrence solve, one per generated index >= 1.
    std::vector<double> cond_log;
    double sys0_residual = 0.0;
    std::vector<std::string> warnings;

    std::size_t size() const { return ss.size(); }
    /// Throws NumericalError if lengths differ or an entry is not finite.
    void check() const;
    /// Keeps indices 0..n-1.
    void truncate(std::size_t n);
};

/// CSV with header n,ss,ps,su,pu,provenance.
void write_kernels_csv(std::ostream& os, const Kernels& k);
Kernels read_kernels_csv(std::istream& is);

/// Cauchy product truncated to n terms.
std::vector<double> cauchy_product(const std::vector<double>& a, const std::vector<double>& b, std::size_t n);

} // namespace kdvtbc
