#include "kdvtbc/diagnostics.hpp"

#include "kdvtbc/error.hpp"

#include <cmath>

namespace kdvtbc {

using cplx = std::complex<double>;

double relative_l2_error(const Field& u, const Field& u_ref, const Grid& grid) {
    if (u.J() != grid.J || u_ref.J() != grid.J)
        throw ParameterError("relative_l2_error: field and grid sizes differ");
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= grid.J; ++j) {
        const double w = (j == 0 || j == grid.J) ? 0.5 * grid.dx : grid.dx;
        const double d = u_ref[j] - u[j];
        num += w * d * d;
        den += w * u_ref[j] * u_ref[j];
    }
    if (!(den > 0.0))
        throw NumericalError("relative_l2_error: reference has zero norm");
    return std::sqrt(num / den);
}

double discrete_energy(const Field& u, const Grid& grid, const ModelParams& params) {
    double e = 0.0;
    for (int j = 1; j <= grid.J; ++j)
        e += 0.5 * u[j] * u[j];
    if (params.alpha != 0.0) {
        double g = 0.0;
        for (int j = 0; j <= grid.J; ++j) {
            const double d = u[j + 1] - u[j];
            g += d * d;
        }
        e += params.alpha * g / (2.0 * grid.dx * grid.dx);
    }
    return e;
}

KernelSymbols kernel_symbols(const Kernels& k, cplx z) {
    const cplx x = 1.0 / z;
    auto eval = [&](const std::vector<double>& c) {
        cplx v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;)
            v = v * x + c[i];
        return v;
    };
    const cplx f = 1.0 + x;
    return {eval(k.ss) / f, eval(k.ps) / f, eval(k.su) / f, eval(k.pu) / f};
}

Dissipativity dissipativity_matrices(double theta, const KernelSymbols& sym, const SchemeRatios& ratios) {
    const cplx z = std::polar(1.0, theta);
    const double w = std::norm(z + 1.0);
    const double ms = ratios.mu * std::sin(theta);
    const double am2 = ratios.a - 2.0;
    const cplx two_i(0.0, 2.0);
    const cplx ss = sym.ss, ps = sym.ps, su = sym.su, pu = sym.pu;

    Dissipativity d;
    d.alpha_s = w / 2.0 * (-ps).real();
    d.beta_s = w / 2.0 * (ss * ss - ps + am2 * ss).real() - ms * ss.imag();
    d.gamma_s = w / 4.0 * (std::conj(ss) - ss * ps - am2 * ps) - ms * ps / two_i;
    d.alpha_u = w / 2.0 * pu.real();
    d.beta_u = w / 2.0 * (pu - su * su - am2 * su).real() - ms * su.imag();
    d.gamma_u = w / 4.0 * (pu * su - std::conj(su) + am2 * pu) + ms * pu / two_i;

    auto min_eig = [](double a, double b, cplx g) {
        const double h = (a - b) / 2.0;
        return (a + b) / 2.0 - std::sqrt(h * h + std::norm(g));
    };
    d.min_eig_s = min_eig(d.alpha_s, d.beta_s, d.gamma_s);
    d.min_eig_u = min_eig(d.alpha_u, d.beta_u, d.gamma_u);
    return d;
}

SlopeFit decay_fit(const std::vector<double>& seq, int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min || static_cast<std::size_t>(n_max) >= seq.size())
        throw ParameterError("decay_fit: invalid index range");
    if (n_max - n_min + 1 < 10)
        throw ParameterError("decay_fit: fewer than 10 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    const double m = n_max - n_min + 1;
    for (int n = n_min; n <= n_max; ++n) {
        const double v = std::abs(seq[static_cast<std::size_t>(n)]);
        if (v == 0.0)
            throw NumericalError("decay_fit: zero entry at n = " + std::to_string(n));
        const double x = std::log(static_cast<double>(n)), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double cxx = sxx - sx * sx / m, cxy = sxy - sx * sy / m, cyy = syy - sy * sy / m;
    SlopeFit f;
    f.slope = cxy / cxx;
    f.r2 = cyy > 0.0 ? (cxy * cxy) / (cxx * cyy) : 1.0;
    return f;
}

std::vector<ConvergenceRow> convergence_table(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3)
        throw ParameterError("convergence_table: >= 3 values required");
    std::vector<ConvergenceRow> rows;
    rows.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ConvergenceRow r;
        r.h = pts[i].first;
        r.E_P = pts[i].second;
        if (i > 0) {
            const auto& [h0, e0] = pts[i - 1];
            if (std::isfinite(e0) && std::isfinite(r.E_P) && e0 > 0.0 && r.E_P > 0.0)
                r.order = std::log(e0 / r.E_P) / std::log(h0 / r.h);
            if (!(r.E_P < e0)) {
                r.monotone = false;
                r.note = "E_P did not decrease";
            }
        }
        if (!std::isfinite(r.E_P))
            r.note = "run failed";
        rows.push_back(r);
    }
    return rows;
}

} // namespace kdvtbc
