#pragma once

#include "kdvtbc/kernels.hpp"
#include "kdvtbc/model.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace kdvtbc {

struct ErrorSample {
    int step = 0;
    double t = 0.0;
    double err = 0.0;
};

struct Snapshot {
    int step = 0;
    double t = 0.0;
    std::vector<double> u; ///< nodes 0..J
};

struct SlopeFit {
    double slope = 0.0;
    double r2 = 0.0;
};

struct RunReport {
    std::vector<ErrorSample> errors;
    /// Max of errors; empty when nothing was compared.
    std::optional<double> E_P;
    /// Discrete energy at every step 0..N.
    std::vector<double> energy;
    std::optional<SlopeFit> slope_fit;
    std::vector<Snapshot> snapshots;
    /// max_n |A u^{n+1} - B u^n - s^n|_inf / |u^n|_inf (steps with u^n = 0 use the absolute residual).
    double max_residual_ratio = 0.0;
    /// max over all steps of |u|_inf, ghosts included.
    double max_abs_u = 0.0;
    double wall_seconds = 0.0;
    std::string config_echo;
    Provenance kernel_provenance = Provenance::exact;
    std::vector<std::string> warnings;
    Field final_state;
};

/// |u_ref - u| / |u_ref| with trapezoidal weights on nodes 0..J.
double relative_l2_error(const Field& u, const Field& u_ref, const Grid& grid);

/// sum_{j=1}^{J} u_j^2/2 + alpha sum_{j=0}^{J} (u_{j+1} - u_j)^2/(2 dx^2)
double discrete_energy(const Field& u, const Grid& grid, const ModelParams& params);

/// Symbols s^s, p^s, s^u, p^u at z: truncated kernel sums divided by (1 + 1/z).
struct KernelSymbols {
    std::complex<double> ss, ps, su, pu;
};
KernelSymbols kernel_symbols(const Kernels& k, std::complex<double> z);

struct Dissipativity {
    double alpha_s = 0.0, beta_s = 0.0;
    std::complex<double> gamma_s;
    double alpha_u = 0.0, beta_u = 0.0;
    std::complex<double> gamma_u;
    double min_eig_s = 0.0, min_eig_u = 0.0;
};

/// 2x2 Hermitian matrices [[alpha, gamma], [conj(gamma), beta]] at z = e^{i theta}.
Dissipativity dissipativity_matrices(double theta, const KernelSymbols& sym, const SchemeRatios& ratios);

/// Least-squares slope of log|seq_n| against log n over n_min..n_max.
SlopeFit decay_fit(const std::vector<double>& seq, int n_min, int n_max);

struct ConvergenceRow {
    double h = 0.0;
    double E_P = 0.0;
    std::optional<double> order; ///< relative to the previous (coarser) row
    bool monotone = true;        ///< false when E_P did not decrease
    std::string note;
};

/// Points ordered as given (coarse to fine). At least 3 required.
std::vector<ConvergenceRow> convergence_table(const std::vector<std::pair<double, double>>& h_and_ep);

} // namespace kdvtbc
