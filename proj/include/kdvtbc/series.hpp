#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace kdvtbc {

using cplx = std::complex<double>;

/// Truncated expansion  sum_{l=0}^{N} c_l z^{-l}  in powers of x = 1/z.
struct LaurentSeries {
    std::vector<cplx> coeffs;
    std::string label;

    LaurentSeries() = default;
    LaurentSeries(std::vector<cplx> c, std::string l = {}) : coeffs(std::move(c)), label(std::move(l)) {}

    std::size_t size() const { return coeffs.size(); }
    const cplx& operator[](std::size_t i) const { return coeffs[i]; }
    cplx& operator[](std::size_t i) { return coeffs[i]; }

    /// Horner evaluation of the truncated sum at z.
    cplx evaluate(cplx z) const;
    /// Largest |Im c_l|.
    double max_imag() const;
};

namespace series {

LaurentSeries constant(cplx v, std::size_t n);
/// (1 - x)/(1 + x) with x = 1/z, i.e. (z - 1)/(z + 1).
LaurentSeries moebius_p(std::size_t n);
/// (1 + x)
LaurentSeries one_plus_x(std::size_t n);

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries scale(const LaurentSeries& a, cplx s);
/// Cauchy product truncated to the shorter length.
LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b);

/// F = G^gamma with F_0 = f0 (the caller fixes the branch, f0^(1/gamma) = G_0).
/// Uses  n G_0 F_n = sum_{k=1}^{n} (gamma k - (n - k)) G_k F_{n-k}.
/// Throws NumericalError when G_0 = 0.
LaurentSeries power(const LaurentSeries& g, double gamma, cplx f0);

} // namespace series

} // namespace kdvtbc
