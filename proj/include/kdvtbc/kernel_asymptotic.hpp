#pragma once

#include "kdvtbc/kernels.hpp"
#include "kdvtbc/model.hpp"
#include "kdvtbc/series.hpp"

#include <cstddef>

namespace kdvtbc {

enum class BinomialSign { minus, plus };

/// Coefficients of (1 - 1/z)^gamma (minus) or (1 + 1/z)^gamma (plus), indices 0..N.
LaurentSeries binomial_series(double gamma, BinomialSign sign, std::size_t N);

struct LkdvSigma {
    LaurentSeries sigma1; ///< -(2/(eps dt))^{1/3} p^{1/3}
    LaurentSeries sigma2; ///<  (2/(eps dt))^{2/3} p^{2/3}
};

/// Indices 0..N.
LkdvSigma sigma_series_lkdv(double eps, double dt, std::size_t N);

/// Pure lKdV kernels (alpha = 0) for indices 0..length-1. order 3 keeps the
/// dx^3/(3 eps dt) corrections on indices 0 and 1, order 2 drops them.
/// A nonzero c is ignored with a warning attached to the result.
Kernels assemble_lkdv_kernels(const ModelParams& params, double dt, double dx, std::size_t length, int order = 3);

/// Intermediate series of the closed-form root of
///   L^3 - 4b L^2 + (c/eps + 5 b^2) L + 2p/(eps dt) - (c/eps) b - 2 b^3 = 0,  b = 2 alpha p/(eps dt),
/// written as L = 8 alpha p/(3 eps dt) + y with y^3 + P y + Q = 0.
struct GeneralExpansion {
    LaurentSeries P, Q, Delta, delta, zeta, mu_plus, mu_minus, lambda1;
    /// Index of the cube-root branch picked at l = 0 (0, 1, 2).
    int branch = 0;
};

/// Indices 0..N. Throws NumericalError("degenerate expansion point") when
/// Delta_0 or zeta_0 vanishes. Delta usually has zeros inside |1/z| < 1, so
/// delta, zeta and mu grow geometrically in l and lose all accuracy for long
/// expansions; lambda1 itself does not have that singularity.
GeneralExpansion general_expansion(const ModelParams& params, double dt, std::size_t N);

/// Same root computed coefficient-wise from the cubic by linearisation about
/// the scalar root at p = 1 whose physical part L - b has negative real part.
LaurentSeries lambda1_cubic_general(const ModelParams& params, double dt, std::size_t N);

/// (1 + 1/z) lambda1, solved directly from the cubic multiplied by (1 + 1/z)^3,
/// whose coefficients are polynomials in 1/z. lambda1 has a pole at z = -1 that
/// makes the unweighted recurrence lose accuracy geometrically; this one does not.
LaurentSeries lambda1_weighted_general(const ModelParams& params, double dt, std::size_t N);

/// KdV-BBM kernels (alpha > 0), first order in dx, indices 0..length-1,
/// built from lambda1_weighted_general.
Kernels assemble_general_kernels(const ModelParams& params, double dt, double dx, std::size_t length);

} // namespace kdvtbc
