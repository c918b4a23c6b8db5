#pragma once

#include "kdvtbc/diagnostics.hpp"
#include "kdvtbc/kernels.hpp"
#include "kdvtbc/model.hpp"
#include "kdvtbc/reference.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kdvtbc {

enum class KernelMode { exact, asymptotic, automatic };
enum class ReferenceMode { airy, spectral, none };

KernelMode parse_kernel_mode(std::string_view s);
std::string_view to_string(KernelMode m);
ReferenceMode parse_reference_mode(std::string_view s);
std::string_view to_string(ReferenceMode m);

struct RunConfig {
    std::string name = "custom";
    ModelParams model;
    double x_left = 0.0;
    double x_right = 1.0;
    double dx = 1.0 / 256.0;
    double dt = 1e-3;
    double T = 4.0;
    InitialKind initial = InitialKind::gaussian;
    KernelMode kernel_mode = KernelMode::automatic;
    ReferenceMode reference = ReferenceMode::spectral;
    std::string out_dir;
    int snapshots = 100;
    int records = 100;
    std::vector<double> sweep_dx;
    std::vector<double> sweep_dt;
    SpectralConfig spectral;

    /// Throws ParameterError naming the field.
    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

/// case1: alpha = c = 0, eps = 1e-3; case2: c = 0, alpha = eps = 1e-3;
/// case3: c = 2, alpha = eps = 1e-3 with the wave packet; longtime: case1
/// physics, dt = 0.1, dx = 2^-10, T = 50, asymptotic kernels, no reference.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

std::string config_to_json(const RunConfig& cfg);
/// Keys absent from the document keep the values of base.
RunConfig config_from_json(const std::string& text, const RunConfig& base = {});
RunConfig load_config(const std::filesystem::path& path, const RunConfig& base = {});

/// N = T/dt rounded; rejects T not a multiple of dt to 1e-9 relative.
Grid make_grid(const RunConfig& cfg);

struct KernelSelection {
    Kernels kernels;
    std::string reason;
};

/// Applies the kernel mode; automatic picks asymptotic kernels when the
/// recurrence condition number exceeds 1e10 or dx^3/(eps dt) < 1e-10.
KernelSelection select_kernels(const RunConfig& cfg, const Grid& grid, std::size_t length);
Kernels asymptotic_kernels(const ModelParams& model, const Grid& grid, std::size_t length);

/// Output root: explicit value, else $TBC_OUT_DIR, else ./out.
std::filesystem::path output_root(const std::string& explicit_dir);

struct CaseResult {
    RunReport report;
    Grid grid;
    std::string kernel_reason;
    std::filesystem::path dir;
};

/// Runs one configuration and writes snapshots.csv, report.csv, kernels.csv
/// and report.json into dir (no files when dir is empty).
CaseResult run_case(const RunConfig& cfg, const std::filesystem::path& dir);

enum class SweepAxis { dx, dt };

struct SweepResult {
    SweepAxis axis = SweepAxis::dx;
    std::vector<ConvergenceRow> table;
    std::vector<std::string> failures; ///< one message per failed value, empty string on success
};

/// One run per sweep value (in parallel over `jobs` threads), merged into
/// convergence_<axis>.csv with columns h,E_P,order. Failed runs become NaN rows.
SweepResult run_sweep(const RunConfig& cfg, SweepAxis axis, int jobs, const std::filesystem::path& dir);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

/// n, four exact, four asymptotic columns for n = 0..N-1.
void export_kernels(const RunConfig& cfg, std::size_t N, std::ostream& os);

struct StabilityRow {
    double theta = 0.0;
    double min_eig_s = 0.0;
    double min_eig_u = 0.0;
};

/// Minimal eigenvalues of the dissipativity matrices on theta in [1e-3, pi - 1e-3].
std::vector<StabilityRow> stability_sweep(const RunConfig& cfg, int n_theta, std::size_t kernel_length);

} // namespace kdvtbc
