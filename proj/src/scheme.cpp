#include "kdvtbc/scheme.hpp"

#include "kdvtbc/error.hpp"
#include "kdvtbc/kernel_exact.hpp"
#include "kdvtbc/simd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <span>

namespace kdvtbc {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

/// sum_{k=0}^{n} ker[n+1-k] h[k]
double conv(const std::vector<double>& ker, const std::vector<double>& h, std::size_t n) {
    return simd::dot_reversed(std::span<const double>(h.data(), n + 1), std::span<const double>(ker.data() + 1, n + 1));
}

void add_source(const Kernels& k, const BoundaryHistory& h, std::size_t n, std::span<double> s) {
    if (k.size() < n + 2)
        throw ParameterError("convolution source at step " + std::to_string(n) +
                             " needs kernels of length " + std::to_string(n + 2) + "; extend kernels first");
    if (h.size() != n + 1)
        throw ParameterError("boundary history length does not match the step index");
    const std::size_t last = s.size() - 1;
    s[0] += conv(k.su, h.um1, n) - conv(k.pu, h.um2, n);
    s[1] += conv(k.su, h.u0, n) - conv(k.pu, h.um1, n);
    s[last - 1] += conv(k.ss, h.uJ, n) - conv(k.ps, h.uJm1, n);
    s[last] += conv(k.ss, h.uJp1, n) - conv(k.ps, h.uJ, n);
}

} // namespace

SchemeMatrices assemble(const SchemeRatios& ratios, const Kernels& kernels, int J, Closure closure) {
    if (J < 5)
        throw ParameterError("assemble: J must be >= 5");
    if (closure == Closure::transparent && kernels.size() == 0)
        throw ParameterError("assemble: kernels need index 0");
    const int n = J + 5;
    SchemeMatrices m;
    m.J = J;
    m.closure = closure;
    m.c_minus = ratios.c_minus();
    m.c_zero = ratios.c_zero();
    m.c_plus = ratios.c_plus();
    m.A = BandMatrix(n, 2, 2);
    m.B = BandMatrix(n, 2, 2);

    for (int i = 2; i <= J + 2; ++i) {
        const double a_row[5] = {-1.0, m.c_minus, m.c_zero, m.c_plus, 1.0};
        const double b_row[5] = {1.0, m.c_plus, m.c_zero, m.c_minus, -1.0};
        for (int d = -2; d <= 2; ++d) {
            m.A.set(i, i + d, a_row[d + 2]);
            m.B.set(i, i + d, b_row[d + 2]);
        }
    }
    if (closure == Closure::dirichlet) {
        for (int i : {0, 1, n - 2, n - 1})
            m.A.set(i, i, 1.0);
    } else {
        const double ss0 = kernels.ss[0], ps0 = kernels.ps[0], su0 = kernels.su[0], pu0 = kernels.pu[0];
        // left rows act on (u_{-2}, u_{-1}, u_0) and (u_{-1}, u_0, u_1)
        for (int i : {0, 1}) {
            m.A.set(i, i, pu0);
            m.A.set(i, i + 1, -su0);
            m.A.set(i, i + 2, 1.0);
            m.B.set(i, i + 2, -1.0);
        }
        // right rows act on (u_{J-1}, u_J, u_{J+1}) and (u_J, u_{J+1}, u_{J+2})
        for (int i : {n - 2, n - 1}) {
            m.A.set(i, i - 2, ps0);
            m.A.set(i, i - 1, -ss0);
            m.A.set(i, i, 1.0);
            m.B.set(i, i, -1.0);
        }
    }
    m.lu = BandedLU(m.A);
    return m;
}

void BoundaryHistory::append(const Field& u) {
    const int J = u.J();
    um2.push_back(u[-2]);
    um1.push_back(u[-1]);
    u0.push_back(u[0]);
    uJm1.push_back(u[J - 1]);
    uJ.push_back(u[J]);
    uJp1.push_back(u[J + 1]);
}

Field convolution_source(const Kernels& kernels, const BoundaryHistory& history, std::size_t n, int J) {
    Field s(J);
    add_source(kernels, history, n, s.raw());
    return s;
}

SolverState::SolverState(Field u0) : u(std::move(u0)) { history.append(u); }

StepInfo step(SolverState& state, const SchemeMatrices& m, const Kernels& kernels) {
    if (state.u.J() != m.J)
        throw ParameterError("step: field size does not match the assembled system");
    const std::size_t n = static_cast<std::size_t>(state.n);
    std::vector<double> rhs(state.u.size());
    m.B.apply(state.u.raw(), rhs);
    if (m.closure == Closure::transparent)
        add_source(kernels, state.history, n, rhs);

    Field next(m.J);
    std::copy(rhs.begin(), rhs.end(), next.raw().begin());
    m.lu.solve(next.raw());

    StepInfo info;
    info.norm_prev = inf_norm(state.u.raw());
    std::vector<double> au(rhs.size());
    m.A.apply(next.raw(), au);
    for (std::size_t i = 0; i < au.size(); ++i) {
        if (!std::isfinite(next.raw()[i]))
            throw NumericalError("non-finite solution at step " + std::to_string(state.n + 1));
        info.residual = std::max(info.residual, std::abs(au[i] - rhs[i]));
    }
    state.u = std::move(next);
    state.history.append(state.u);
    ++state.n;
    return info;
}

std::vector<int> evenly_spaced_steps(int N, int count) {
    std::vector<int> out;
    if (N <= 0)
        return out;
    if (count <= 0 || count >= N) {
        for (int n = 1; n <= N; ++n)
            out.push_back(n);
        return out;
    }
    for (int i = 1; i <= count; ++i) {
        const int s = static_cast<int>(std::lround(static_cast<double>(i) * N / count));
        if (out.empty() || s > out.back())
            out.push_back(s);
    }
    if (out.back() != N)
        out.push_back(N);
    return out;
}

RunReport run(const ModelParams& params, const Grid& grid, const Kernels& kernels, const Field& u0,
              const RunOptions& options) {
    const auto t_start = std::chrono::steady_clock::now();
    params.validate();
    if (u0.J() != grid.J)
        throw ParameterError("run: initial field does not match the grid");
    const SchemeRatios ratios = options.ratios ? *options.ratios : derive_ratios(params, grid);
    const std::size_t need = static_cast<std::size_t>(grid.N) + 2;

    RunReport report;
    report.kernel_provenance = kernels.provenance;
    report.warnings = kernels.warnings;

    const Kernels* kp = &kernels;
    Kernels extended;
    if (options.closure == Closure::transparent && kernels.size() < need) {
        if (kernels.provenance != Provenance::exact)
            throw ParameterError("run: asymptotic kernels shorter than N + 2");
        extended = kernels;
        extend_kernels_to(extended, ratios, need);
        kp = &extended;
        report.warnings = extended.warnings;
    }

    const SchemeMatrices m = assemble(ratios, *kp, grid.J, options.closure);
    SolverState state(u0);

    const std::vector<int> snap_steps = evenly_spaced_steps(grid.N, options.snapshots);
    const std::vector<int> rec_steps = evenly_spaced_steps(grid.N, options.records);
    auto snap_it = snap_steps.begin();
    auto rec_it = rec_steps.begin();

    auto take_snapshot = [&](const Field& u, int n) {
        Snapshot s;
        s.step = n;
        s.t = grid.t(n);
        s.u.assign(u.interior().begin(), u.interior().end());
        report.snapshots.push_back(std::move(s));
    };

    take_snapshot(state.u, 0);
    report.energy.push_back(discrete_energy(state.u, grid, params));
    report.max_abs_u = state.u.max_abs();

    for (int n = 0; n < grid.N; ++n) {
        StepInfo info;
        try {
            info = step(state, m, *kp);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " (t = " + std::to_string(grid.t(n + 1)) + ")");
        }
        const double ratio = info.norm_prev > 0.0 ? info.residual / info.norm_prev : info.residual;
        report.max_residual_ratio = std::max(report.max_residual_ratio, ratio);
        report.energy.push_back(discrete_energy(state.u, grid, params));
        report.max_abs_u = std::max(report.max_abs_u, state.u.max_abs());

        const int s = state.n;
        if (snap_it != snap_steps.end() && *snap_it == s) {
            take_snapshot(state.u, s);
            ++snap_it;
        }
        if (rec_it != rec_steps.end() && *rec_it == s) {
            if (options.reference) {
                const Field ref = options.reference(grid.t(s));
                report.errors.push_back({s, grid.t(s), relative_l2_error(state.u, ref, grid)});
            }
            ++rec_it;
        }
    }
    if (!report.errors.empty()) {
        double ep = 0.0;
        for (const auto& e : report.errors)
            ep = std::max(ep, e.err);
        report.E_P = ep;
    }
    report.final_state = state.u;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

} // namespace kdvtbc
