#pragma once

#include "kdvtbc/banded.hpp"
#include "kdvtbc/diagnostics.hpp"
#include "kdvtbc/kernels.hpp"
#include "kdvtbc/model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace kdvtbc {

/// transparent: convolution boundary rows; dirichlet: ghosts held at zero.
enum class Closure { transparent, dirichlet };

/// A u^{n+1} = B u^n + s^n on the J+5 unknowns u_{-2}..u_{J+2}.
struct SchemeMatrices {
    int J = 0;
    Closure closure = Closure::transparent;
    double c_minus = 0.0, c_zero = 0.0, c_plus = 0.0;
    BandMatrix A, B;
    BandedLU lu;
};

/// Throws NumericalError if A cannot be factorised.
SchemeMatrices assemble(const SchemeRatios& ratios, const Kernels& kernels, int J,
                        Closure closure = Closure::transparent);

/// Boundary traces needed by the convolution rows, one entry per time level.
struct BoundaryHistory {
    std::vector<double> um2, um1, u0;   ///< u_{-2}, u_{-1}, u_0
    std::vector<double> uJm1, uJ, uJp1; ///< u_{J-1}, u_J, u_{J+1}

    std::size_t size() const { return u0.size(); }
    void append(const Field& u);
};

/// s^n (length J+5); only rows 0, 1, J+3, J+4 are nonzero.
/// Throws ParameterError("extend kernels first") if kernels.size() < n + 2.
Field convolution_source(const Kernels& kernels, const BoundaryHistory& history, std::size_t n, int J);

struct SolverState {
    Field u;
    BoundaryHistory history;
    int n = 0;

    explicit SolverState(Field u0);
};

struct StepInfo {
    double residual = 0.0;  ///< |A u^{n+1} - B u^n - s^n|_inf
    double norm_prev = 0.0; ///< |u^n|_inf
};

/// Advances one step in place. Throws NumericalError on non-finite values.
StepInfo step(SolverState& state, const SchemeMatrices& m, const Kernels& kernels);

using ReferenceFn = std::function<Field(double t)>;

struct RunOptions {
    Closure closure = Closure::transparent;
    /// Snapshots at this many evenly spaced steps besides t = 0 (0: initial and final only).
    int snapshots = 100;
    /// Error samples at this many evenly spaced steps (0: every step).
    int records = 100;
    /// Whole-line reference; errors are skipped when empty.
    ReferenceFn reference;
    /// Used to extend exact kernels that are shorter than N + 2.
    std::optional<SchemeRatios> ratios;
};

/// Steps evenly spaced over 1..N, always including N.
std::vector<int> evenly_spaced_steps(int N, int count);

RunReport run(const ModelParams& params, const Grid& grid, const Kernels& kernels, const Field& u0,
              const RunOptions& options = {});

} // namespace kdvtbc
