#pragma once

#include <span>
#include <vector>

namespace kdvtbc {

/// Square band matrix with kl sub- and ku super-diagonals, LAPACK band layout.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(int n, int kl, int ku);

    int n() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }

    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
    double get(int i, int j) const;
    /// Throws when (i, j) lies outside the band.
    void set(int i, int j, double v);

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const;

    /// Storage with kl extra rows for pivoting fill-in, as dgbtrf expects.
    const std::vector<double>& storage() const { return ab_; }
    int ldab() const { return 2 * kl_ + ku_ + 1; }

private:
    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> ab_;
};

/// LU factorisation with partial pivoting (dgbtrf), reusable for many solves.
class BandedLU {
public:
    BandedLU() = default;
    /// Throws NumericalError on an exactly singular pivot.
    explicit BandedLU(const BandMatrix& a);

    /// Overwrites rhs with the solution.
    void solve(std::span<double> rhs) const;
    int n() const { return n_; }
    /// Reciprocal 1-norm condition estimate (dgbcon).
    double rcond() const { return rcond_; }

private:
    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> ab_;
    std::vector<int> ipiv_;
    double rcond_ = 0.0;
};

} // namespace kdvtbc
