#include "kdvtbc/series.hpp"

#include "kdvtbc/error.hpp"

#include <algorithm>
#include <cmath>

namespace kdvtbc {

cplx LaurentSeries::evaluate(cplx z) const {
    const cplx x = 1.0 / z;
    cplx v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        v = v * x + coeffs[i];
    return v;
}

double LaurentSeries::max_imag() const {
    double m = 0.0;
    for (const auto& c : coeffs)
        m = std::max(m, std::abs(c.imag()));
    return m;
}

namespace series {

LaurentSeries constant(cplx v, std::size_t n) {
    LaurentSeries s(std::vector<cplx>(n, 0.0));
    if (n > 0)
        s[0] = v;
    return s;
}

LaurentSeries moebius_p(std::size_t n) {
    LaurentSeries s(std::vector<cplx>(n, 0.0), "p");
    for (std::size_t l = 0; l < n; ++l)
        s[l] = l == 0 ? 1.0 : (l % 2 == 1 ? -2.0 : 2.0);
    return s;
}

LaurentSeries one_plus_x(std::size_t n) {
    LaurentSeries s(std::vector<cplx>(n, 0.0), "1+1/z");
    if (n > 0)
        s[0] = 1.0;
    if (n > 1)
        s[1] = 1.0;
    return s;
}

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) {
    const std::size_t n = std::min(a.size(), b.size());
    LaurentSeries r{std::vector<cplx>(n)};
    for (std::size_t i = 0; i < n; ++i)
        r[i] = a[i] + b[i];
    return r;
}

LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) {
    const std::size_t n = std::min(a.size(), b.size());
    LaurentSeries r{std::vector<cplx>(n)};
    for (std::size_t i = 0; i < n; ++i)
        r[i] = a[i] - b[i];
    return r;
}

LaurentSeries scale(const LaurentSeries& a, cplx s) {
    LaurentSeries r = a;
    for (auto& c : r.coeffs)
        c *= s;
    r.label.clear();
    return r;
}

LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
    const std::size_t n = std::min(a.size(), b.size());
    LaurentSeries r(std::vector<cplx>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

LaurentSeries power(const LaurentSeries& g, double gamma, cplx f0) {
    const std::size_t n = g.size();
    if (n == 0)
        return {};
    if (g[0] == 0.0)
        throw NumericalError("series power: leading coefficient is zero");
    LaurentSeries f(std::vector<cplx>(n, 0.0));
    f[0] = f0;
    for (std::size_t m = 1; m < n; ++m) {
        cplx s = 0.0;
        for (std::size_t k = 1; k <= m; ++k)
            s += (gamma * static_cast<double>(k) - static_cast<double>(m - k)) * g[k] * f[m - k];
        f[m] = s / (static_cast<double>(m) * g[0]);
    }
    return f;
}

} // namespace series

} // namespace kdvtbc
