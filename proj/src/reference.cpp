#include "kdvtbc/reference.hpp"

#include "kdvtbc/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

namespace kdvtbc {

namespace {

constexpr long double ai0 = 0.355028053887817239260063186004183176L;
constexpr long double aip0 = 0.258819403792806798405183560189203963L; // -Ai'(0)

double airy_series(double xd) {
    const long double x = xd;
    const long double x3 = x * x * x;
    long double f = 1.0L, g = x;
    long double tf = 1.0L, tg = x;
    for (int k = 1; k < 400; ++k) {
        tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
        tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
        f += tf;
        g += tg;
        if (std::fabs(tf) < 1e-24L * std::fabs(f) + 1e-30L && std::fabs(tg) < 1e-24L * std::fabs(g) + 1e-30L)
            break;
    }
    return static_cast<double>(ai0 * f - aip0 * g);
}

/// Coefficients u_k of the asymptotic expansions.
double u_coeff_next(double uk_prev, int k) {
    return uk_prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
}

constexpr int asym_terms = 25;

double airy_asymptotic_pos(double x) {
    const double z = 2.0 / 3.0 * x * std::sqrt(x);
    double sum = 1.0, u = 1.0;
    for (int k = 1; k <= asym_terms; ++k) {
        u = u_coeff_next(u, k);
        sum += (k % 2 ? -1.0 : 1.0) * u / std::pow(z, k);
    }
    return std::exp(-z) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25)) * sum;
}

double airy_asymptotic_neg(double x) {
    const double ax = -x;
    const double z = 2.0 / 3.0 * ax * std::sqrt(ax);
    // Ai(-ax) = (sin(z + pi/4) P - cos(z + pi/4) Q) / (sqrt(pi) ax^{1/4})
    double P = 1.0, Q = 0.0, u = 1.0;
    for (int k = 1; k <= asym_terms; ++k) {
        u = u_coeff_next(u, k);
        const double mag = u / std::pow(z, k);
        if (k % 2)
            Q += (((k - 1) / 2) % 2 ? -1.0 : 1.0) * mag;
        else
            P += ((k / 2) % 2 ? -1.0 : 1.0) * mag;
    }
    const double ph = z + std::numbers::pi / 4.0;
    return (std::sin(ph) * P - std::cos(ph) * Q) / (std::sqrt(std::numbers::pi) * std::pow(ax, 0.25));
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t next_pow2(double v) {
    std::size_t n = 1;
    while (static_cast<double>(n) < v)
        n <<= 1;
    return n;
}

/// exp(i phase) for mode k of an M-periodic grid; the Nyquist mode is left unchanged.
std::complex<double> symbol(std::size_t k, std::size_t M, double dx, double t, const ModelParams& p) {
    if (2 * k == M)
        return 1.0;
    const double xi = 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(M) * dx);
    const double phase = (p.eps * xi * xi * xi - p.c * xi) * t / (1.0 + p.alpha * xi * xi);
    return std::polar(1.0, phase);
}

struct Plan {
    std::size_t M = 0;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    explicit Plan(std::size_t m) : M(m) {
        std::lock_guard lock(fftw_planner_mutex());
        real = fftw_alloc_real(M);
        spec = fftw_alloc_complex(M / 2 + 1);
        if (!real || !spec)
            throw NumericalError("FFTW allocation failed");
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(M), real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(M), spec, real, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(fftw_planner_mutex());
        if (fwd)
            fftw_destroy_plan(fwd);
        if (bwd)
            fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

} // namespace

double airy(double x) {
    if (x > 50.0)
        return 0.0;
    if (std::abs(x) <= 8.0)
        return airy_series(x);
    return x > 0.0 ? airy_asymptotic_pos(x) : airy_asymptotic_neg(x);
}

Field reference_airy(const Profile& u0, double t, const ModelParams& params, const Grid& grid, int refine) {
    params.validate();
    if (params.alpha != 0.0 || params.c != 0.0)
        throw ParameterError("reference_airy: requires alpha = 0 and c = 0");
    if (!(t > 0.0))
        throw ParameterError("reference_airy: t must be > 0");
    if (refine < 1)
        throw ParameterError("reference_airy: refine must be >= 1");
    if (!u0)
        throw ParameterError("reference_airy: empty profile");

    const double s = std::cbrt(3.0 * params.eps * t);
    const int K = grid.J * refine;
    const double h = grid.dx / refine;
    std::vector<double> w(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k)
        w[static_cast<std::size_t>(k)] = u0(grid.x_left + k * h) * ((k == 0 || k == K) ? 0.5 * h : h);

    Field out(grid.J);
    for (int j = 0; j <= grid.J; ++j) {
        const double x = grid.x(j);
        double acc = 0.0;
        for (int k = 0; k <= K; ++k) {
            const double wk = w[static_cast<std::size_t>(k)];
            if (wk == 0.0)
                continue;
            acc += wk * airy((x - (grid.x_left + k * h)) / s);
        }
        out[j] = acc / s;
    }
    return out;
}

struct SpectralPropagator::Impl {
    Field u0;
    ModelParams params;
    Grid grid;
    SpectralConfig cfg;
    double factor = 0.0;
    std::size_t offset = 0;
    std::unique_ptr<Plan> plan;
    std::vector<std::complex<double>> u_hat;

    void setup(double f) {
        factor = f;
        const std::size_t nodes = static_cast<std::size_t>(grid.J) + 1;
        const std::size_t M = next_pow2(std::max(static_cast<double>(cfg.min_modes), f * static_cast<double>(nodes)));
        plan = std::make_unique<Plan>(M);
        offset = (M - nodes) / 2;
        std::fill(plan->real, plan->real + M, 0.0);
        for (std::size_t j = 0; j < nodes; ++j)
            plan->real[offset + j] = u0[static_cast<int>(j)];
        fftw_execute(plan->fwd);
        u_hat.assign(M / 2 + 1, 0.0);
        double mx = 0.0;
        for (std::size_t k = 0; k <= M / 2; ++k) {
            u_hat[k] = {plan->spec[k][0], plan->spec[k][1]};
            mx = std::max(mx, std::abs(u_hat[k]));
        }
        if (cfg.cutoff > 0.0)
            for (auto& c : u_hat)
                if (std::abs(c) < cfg.cutoff * mx)
                    c = 0.0;
    }

    void evaluate(double t) {
        const std::size_t M = plan->M;
        for (std::size_t k = 0; k <= M / 2; ++k) {
            const std::complex<double> v = u_hat[k] * symbol(k, M, grid.dx, t, params) / static_cast<double>(M);
            plan->spec[k][0] = v.real();
            plan->spec[k][1] = v.imag();
        }
        fftw_execute(plan->bwd);
    }

    bool wrapped() const {
        const std::size_t M = plan->M;
        const std::size_t band = std::max<std::size_t>(M / 16, 1);
        double mx = 0.0, edge = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double v = std::abs(plan->real[i]);
            mx = std::max(mx, v);
            if (i < band || i >= M - band)
                edge = std::max(edge, v);
        }
        return edge > 1e-10 * mx;
    }

    void evaluate_checked(double t) {
        for (;;) {
            evaluate(t);
            if (!wrapped())
                return;
            if (factor * 2.0 > cfg.max_domain_factor)
                throw NumericalError("spectral reference: wrap-around at t = " + std::to_string(t) +
                                     " with domain_factor " + std::to_string(factor) + "; increase domain_factor");
            setup(factor * 2.0);
        }
    }
};

SpectralPropagator::SpectralPropagator(const Field& u0, const ModelParams& params, const Grid& grid,
                                       SpectralConfig cfg)
    : impl_(std::make_unique<Impl>()) {
    params.validate();
    if (u0.J() != grid.J)
        throw ParameterError("spectral reference: field does not match the grid");
    if (!(cfg.domain_factor >= 4.0))
        throw ParameterError("spectral reference: domain_factor must be >= 4");
    impl_->u0 = u0;
    impl_->params = params;
    impl_->grid = grid;
    impl_->cfg = cfg;
    impl_->setup(cfg.domain_factor);
}

SpectralPropagator::~SpectralPropagator() = default;
SpectralPropagator::SpectralPropagator(SpectralPropagator&&) noexcept = default;
SpectralPropagator& SpectralPropagator::operator=(SpectralPropagator&&) noexcept = default;

Field SpectralPropagator::at(double t) {
    if (!(t >= 0.0))
        throw ParameterError("spectral reference: t must be >= 0");
    impl_->evaluate_checked(t);
    Field out(impl_->grid.J);
    for (int j = 0; j <= impl_->grid.J; ++j)
        out[j] = impl_->plan->real[impl_->offset + static_cast<std::size_t>(j)];
    return out;
}

std::vector<double> SpectralPropagator::padded(double t) {
    impl_->evaluate_checked(t);
    return {impl_->plan->real, impl_->plan->real + impl_->plan->M};
}

double SpectralPropagator::domain_factor() const { return impl_->factor; }
std::size_t SpectralPropagator::modes() const { return impl_->plan->M; }
std::size_t SpectralPropagator::offset() const { return impl_->offset; }

Field reference_spectral(const Field& u0, double t, const ModelParams& params, const Grid& grid, SpectralConfig cfg) {
    SpectralPropagator prop(u0, params, grid, cfg);
    return prop.at(t);
}

std::vector<double> propagate_periodic(const std::vector<double>& v, double dx, double t, const ModelParams& params) {
    const std::size_t M = v.size();
    if (M < 2)
        throw ParameterError("propagate_periodic: need at least 2 points");
    Plan plan(M);
    std::copy(v.begin(), v.end(), plan.real);
    fftw_execute(plan.fwd);
    for (std::size_t k = 0; k <= M / 2; ++k) {
        const std::complex<double> c =
            std::complex<double>(plan.spec[k][0], plan.spec[k][1]) * symbol(k, M, dx, t, params) / static_cast<double>(M);
        plan.spec[k][0] = c.real();
        plan.spec[k][1] = c.imag();
    }
    fftw_execute(plan.bwd);
    return {plan.real, plan.real + M};
}

} // namespace kdvtbc
