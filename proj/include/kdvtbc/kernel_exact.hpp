#pragma once

#include "kdvtbc/continuous.hpp"
#include "kdvtbc/kernels.hpp"
#include "kdvtbc/model.hpp"

#include <array>
#include <complex>

namespace kdvtbc {

/// Roots of the characteristic quartic in r, sorted by modulus.
struct QuarticRoots {
    std::array<cplx, 4> r;
    /// Symbol argument p = (z - 1)/(z + 1); p = 1 for z at infinity.
    cplx p;
};

/// Quartic  r^4 - (2 - a + mu p) r^3 + (4/lambda_D + 2 mu) p r^2 + (2 - a - mu p) r - 1.
/// Requires |z| > 1; throws NumericalError when the two-inside/two-outside
/// separation fails by the 1e-12 margin.
QuarticRoots quartic_roots_at(cplx z, const SchemeRatios& ratios);
/// Same with p given directly (Re p > 0); p = 1 is z at infinity.
QuarticRoots quartic_roots_at_p(cplx p, const SchemeRatios& ratios);

struct InitialCoefficients {
    double ss0 = 0.0, ps0 = 0.0, su0 = 0.0, pu0 = 0.0;
    /// Max residual of the four index-0 relations.
    double sys0_residual = 0.0;
};

/// Index-0 kernel values from the roots at z = infinity.
InitialCoefficients init_kernels(const SchemeRatios& ratios);

/// Index-n right-hand sides of the four functional equations.
struct SigmaSequences {
    double s1[2];
    double s2[3];
    double s3[3];
    double s4[3];
    double sigma1(std::size_t n) const { return n < 2 ? s1[n] : 0.0; }
    double sigma2(std::size_t n) const { return n < 3 ? s2[n] : 0.0; }
    double sigma3(std::size_t n) const { return n < 3 ? s3[n] : 0.0; }
    double sigma4(std::size_t n) const { return n < 3 ? s4[n] : 0.0; }
};
SigmaSequences sigma_sequences(const SchemeRatios& ratios);

/// 1-norm condition number of the constant 4x4 recurrence matrix.
double recurrence_condition(const SchemeRatios& ratios);

/// Kernels holding only index 0.
Kernels start_exact_kernels(const SchemeRatios& ratios);

/// Appends index n = kernels.size() from the linear recurrence.
void extend_kernels(Kernels& kernels, const SchemeRatios& ratios);
/// Extends until kernels.size() >= length.
void extend_kernels_to(Kernels& kernels, const SchemeRatios& ratios, std::size_t length);

/// Indices 0..length-1.
Kernels generate_exact_kernels(const SchemeRatios& ratios, std::size_t length);

} // namespace kdvtbc
