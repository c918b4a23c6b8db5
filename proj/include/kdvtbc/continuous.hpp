#pragma once

#include "kdvtbc/model.hpp"

#include <complex>

namespace kdvtbc {

using cplx = std::complex<double>;

/// Roots of eps l^3 - alpha s l^2 + c l + s = 0, ordered by real part
/// (ties by imaginary part); lambda1 is the one with negative real part.
struct ContinuousRoots {
    cplx lambda1, lambda2, lambda3;
    cplx s;
};

/// For Re(s) = 0 the labels are fixed at s + eta, eta = 1e-8 max(1, |s|), and
/// each label is given the nearest root at s itself.
/// Throws NumericalError if Re(s) > 0 and no root has Re < -1e-12.
ContinuousRoots cubic_roots(cplx s, const ModelParams& params);

/// |s + c l - alpha s l^2 + eps l^3|
double cubic_residual(cplx lambda, cplx s, const ModelParams& params);

/// c/2 + eps (Re(l1^2) - |l1|^2/2) - alpha Re(i xi l1) with l1 = lambda1(i xi).
double stability_functional(double xi, const ModelParams& params);

} // namespace kdvtbc
