#pragma once

#include "kdvtbc/model.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace kdvtbc {

/// Ai(x) to about 1e-13 absolute: extended-precision Maclaurin series for
/// |x| <= 8, 25-term asymptotic expansions beyond.
/// Returns 0 for x > 50.
double airy(double x);

/// Whole-line lKdV solution (alpha = c = 0) at time t > 0 by trapezoidal
/// quadrature of E(t, x - y) u0(y), E(t, x) = (3 eps t)^{-1/3} Ai(x (3 eps t)^{-1/3}),
/// over [x_left, x_right] with step dx/refine.
Field reference_airy(const Profile& u0, double t, const ModelParams& params, const Grid& grid, int refine = 4);

struct SpectralConfig {
    /// Padded period as a multiple of the computational extent; doubled while wrap-around is detected.
    double domain_factor = 8.0;
    double max_domain_factor = 4096.0;
    std::size_t min_modes = 1024;
    /// Fourier modes below cutoff * max |u_hat| are dropped (0 keeps all).
    double cutoff = 0.0;

    bool operator==(const SpectralConfig&) const = default;
};

/// Fourier propagation of grid data with the exact symbol
/// exp(i (eps xi^3 - c xi) t / (1 + alpha xi^2)).
class SpectralPropagator {
public:
    SpectralPropagator(const Field& u0, const ModelParams& params, const Grid& grid, SpectralConfig cfg = {});
    ~SpectralPropagator();
    SpectralPropagator(SpectralPropagator&&) noexcept;
    SpectralPropagator& operator=(SpectralPropagator&&) noexcept;

    /// Solution restricted to [x_left, x_right]. Throws NumericalError
    /// ("increase domain_factor") when wrap-around persists at the cap.
    Field at(double t);
    /// Full periodic array at the current padding.
    std::vector<double> padded(double t);

    double domain_factor() const;
    std::size_t modes() const;
    /// Index of node 0 inside the padded array.
    std::size_t offset() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Field reference_spectral(const Field& u0, double t, const ModelParams& params, const Grid& grid,
                         SpectralConfig cfg = {});

/// Applies the symbol to a periodic array of spacing dx (no padding, no wrap check).
std::vector<double> propagate_periodic(const std::vector<double>& v, double dx, double t, const ModelParams& params);

} // namespace kdvtbc
