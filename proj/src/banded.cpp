#include "kdvtbc/banded.hpp"

#include "kdvtbc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info, std::size_t trans_len);
void dgbcon_(const char* norm, const int* n, const int* kl, const int* ku, const double* ab, const int* ldab,
             const int* ipiv, const double* anorm, double* rcond, double* work, int* iwork, int* info,
             std::size_t norm_len);
}

namespace kdvtbc {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ab_(static_cast<std::size_t>(2 * kl + ku + 1) * static_cast<std::size_t>(n), 0.0) {
    if (n <= 0 || kl < 0 || ku < 0)
        throw ParameterError("BandMatrix: invalid shape");
}

double BandMatrix::get(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || !in_band(i, j))
        return 0.0;
    return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab()];
}

void BandMatrix::set(int i, int j, double v) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || !in_band(i, j))
        throw ParameterError("BandMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside band");
    ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab()] = v;
}

void BandMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
        throw ParameterError("BandMatrix::apply: size mismatch");
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
        for (int j = j0; j <= j1; ++j)
            s += get(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
}

BandedLU::BandedLU(const BandMatrix& a)
    : n_(a.n()), kl_(a.kl()), ku_(a.ku()), ab_(a.storage()), ipiv_(static_cast<std::size_t>(a.n())) {
    double anorm = 0.0;
    for (int j = 0; j < n_; ++j) {
        double col = 0.0;
        for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
            col += std::abs(a.get(i, j));
        anorm = std::max(anorm, col);
    }
    const int ldab = a.ldab();
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab, ipiv_.data(), &info);
    if (info < 0)
        throw NumericalError("dgbtrf: illegal argument " + std::to_string(-info));
    if (info > 0)
        throw NumericalError("banded LU: matrix is singular (zero pivot at row " + std::to_string(info) + ")");
    std::vector<double> work(3 * static_cast<std::size_t>(n_));
    std::vector<int> iwork(static_cast<std::size_t>(n_));
    const char norm = '1';
    dgbcon_(&norm, &n_, &kl_, &ku_, ab_.data(), &ldab, ipiv_.data(), &anorm, &rcond_, work.data(), iwork.data(),
            &info, 1);
    if (info != 0)
        rcond_ = 0.0;
}

void BandedLU::solve(std::span<double> rhs) const {
    if (static_cast<int>(rhs.size()) != n_)
        throw ParameterError("BandedLU::solve: size mismatch");
    const char trans = 'N';
    const int nrhs = 1, ldab = 2 * kl_ + ku_ + 1;
    int info = 0;
    dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab, ipiv_.data(), rhs.data(), &n_, &info, 1);
    if (info != 0)
        throw NumericalError("dgbtrs failed with info " + std::to_string(info));
}

} // namespace kdvtbc
