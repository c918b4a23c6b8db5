// kdvtbc: experiment driver for the KdV-BBM transparent boundary solver.

#include "kdvtbc/error.hpp"
#include "kdvtbc/experiment.hpp"
#include "kdvtbc/format.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace kdvtbc;

namespace {

struct Common {
    std::string config;
    std::string preset;
    std::string kernel_mode;
    std::string reference;
    std::string out;
    std::optional<double> dx, dt, T;
    int jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--preset", c.preset, "case1 | case2 | case3 | longtime");
    app->add_option("--kernel-mode", c.kernel_mode, "exact | asymptotic | auto");
    app->add_option("--reference", c.reference, "airy | spectral | none");
    app->add_option("--out", c.out, "output root (default $TBC_OUT_DIR or ./out)");
    app->add_option("--dx", c.dx, "space step");
    app->add_option("--dt", c.dt, "time step");
    app->add_option("--T", c.T, "final time");
    app->add_option("--jobs", c.jobs, "parallel runs for sweeps")->check(CLI::PositiveNumber);
}

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.preset.empty() ? preset("case1") : preset(c.preset);
    if (c.preset.empty())
        cfg.name = "custom";
    if (!c.config.empty())
        cfg = load_config(c.config, cfg);
    if (!c.kernel_mode.empty())
        cfg.kernel_mode = parse_kernel_mode(c.kernel_mode);
    if (!c.reference.empty())
        cfg.reference = parse_reference_mode(c.reference);
    if (c.dx)
        cfg.dx = *c.dx;
    if (c.dt)
        cfg.dt = *c.dt;
    if (c.T)
        cfg.T = *c.T;
    if (!c.out.empty())
        cfg.out_dir = c.out;
    return cfg;
}

fs::path case_dir(const RunConfig& cfg) { return output_root(cfg.out_dir) / cfg.name; }

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "-"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KdV-BBM solver with discrete transparent boundary conditions"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, kern_opts, stab_opts;
    auto* run_cmd = app.add_subcommand("run", "single run: kernels, time loop, diagnostics");
    add_common(run_cmd, run_opts);

    auto* sweep_cmd = app.add_subcommand("sweep", "dx or dt convergence sweep");
    add_common(sweep_cmd, sweep_opts);
    std::string axis = "dx";
    sweep_cmd->add_option("--axis", axis, "dx | dt")->check(CLI::IsMember({"dx", "dt"}));

    auto* kern_cmd = app.add_subcommand("kernels", "export exact and asymptotic kernels side by side");
    add_common(kern_cmd, kern_opts);
    std::size_t n_kernels = 1000;
    kern_cmd->add_option("--n", n_kernels, "number of coefficients");

    auto* stab_cmd = app.add_subcommand("stability-sweep", "dissipativity matrices on the unit circle");
    add_common(stab_cmd, stab_opts);
    int n_theta = 512;
    std::size_t stab_len = 2000;
    stab_cmd->add_option("--n-theta", n_theta, "number of angles in (0, pi)");
    stab_cmd->add_option("--length", stab_len, "kernel truncation length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const RunConfig cfg = resolve(run_opts);
            const fs::path dir = case_dir(cfg);
            const CaseResult r = run_case(cfg, dir);
            std::cout << "kernels: " << r.kernel_reason << '\n'
                      << "J = " << r.grid.J << ", N = " << r.grid.N << '\n'
                      << "E_P = " << opt(r.report.E_P) << '\n'
                      << "energy: " << format_double(r.report.energy.front()) << " -> "
                      << format_double(r.report.energy.back()) << '\n'
                      << "max residual ratio = " << format_double(r.report.max_residual_ratio) << '\n'
                      << "wall time = " << r.report.wall_seconds << " s\n";
            for (const auto& w : r.report.warnings)
                std::cout << "warning: " << w << '\n';
            std::cout << "wrote " << dir.string() << '\n';
        } else if (*sweep_cmd) {
            const RunConfig cfg = resolve(sweep_opts);
            const SweepAxis ax = axis == "dx" ? SweepAxis::dx : SweepAxis::dt;
            const fs::path dir = case_dir(cfg) / ("sweep_" + axis);
            const SweepResult res = run_sweep(cfg, ax, sweep_opts.jobs, dir);
            write_convergence_csv(std::cout, res.table);
            int failed = 0;
            for (const auto& row : res.table)
                if (!row.note.empty()) {
                    std::cerr << "h = " << format_double(row.h) << ": " << row.note << '\n';
                    failed += !std::isfinite(row.E_P);
                }
            std::cout << "wrote " << dir.string() << '\n';
            return failed ? 3 : 0;
        } else if (*kern_cmd) {
            const RunConfig cfg = resolve(kern_opts);
            const fs::path dir = case_dir(cfg);
            fs::create_directories(dir);
            std::ofstream os(dir / "kernels_compare.csv");
            export_kernels(cfg, n_kernels, os);
            std::cout << "wrote " << (dir / "kernels_compare.csv").string() << '\n';
        } else if (*stab_cmd) {
            const RunConfig cfg = resolve(stab_opts);
            const fs::path dir = case_dir(cfg);
            fs::create_directories(dir);
            const auto rows = stability_sweep(cfg, n_theta, stab_len);
            std::ofstream os(dir / "stability.csv");
            os << "theta,min_eig_s,min_eig_u\n";
            double ms = INFINITY, mu = INFINITY;
            for (const auto& r : rows) {
                os << format_double(r.theta) << ',' << format_double(r.min_eig_s) << ',' << format_double(r.min_eig_u)
                   << '\n';
                ms = std::min(ms, r.min_eig_s);
                mu = std::min(mu, r.min_eig_u);
            }
            std::cout << "min eigenvalue (stable side) = " << format_double(ms) << '\n'
                      << "min eigenvalue (unstable side) = " << format_double(mu) << '\n'
                      << "wrote " << (dir / "stability.csv").string() << '\n';
        }
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
