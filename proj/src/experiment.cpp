#include "kdvtbc/experiment.hpp"

#include "kdvtbc/error.hpp"
#include "kdvtbc/format.hpp"
#include "kdvtbc/kernel_asymptotic.hpp"
#include "kdvtbc/kernel_exact.hpp"
#include "kdvtbc/scheme.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <thread>

namespace kdvtbc {

namespace fs = std::filesystem;
using nlohmann::json;

KernelMode parse_kernel_mode(std::string_view s) {
    if (s == "exact")
        return KernelMode::exact;
    if (s == "asymptotic")
        return KernelMode::asymptotic;
    if (s == "auto")
        return KernelMode::automatic;
    throw ParameterError("kernel_mode must be exact, asymptotic or auto (got '" + std::string(s) + "')");
}

std::string_view to_string(KernelMode m) {
    switch (m) {
    case KernelMode::exact: return "exact";
    case KernelMode::asymptotic: return "asymptotic";
    case KernelMode::automatic: return "auto";
    }
    return "?";
}

ReferenceMode parse_reference_mode(std::string_view s) {
    if (s == "airy")
        return ReferenceMode::airy;
    if (s == "spectral")
        return ReferenceMode::spectral;
    if (s == "none")
        return ReferenceMode::none;
    throw ParameterError("reference must be airy, spectral or none (got '" + std::string(s) + "')");
}

std::string_view to_string(ReferenceMode m) {
    switch (m) {
    case ReferenceMode::airy: return "airy";
    case ReferenceMode::spectral: return "spectral";
    case ReferenceMode::none: return "none";
    }
    return "?";
}

void RunConfig::validate() const {
    model.validate();
    if (!(T > 0.0) || !std::isfinite(T))
        throw ParameterError("T must be > 0");
    if (initial == InitialKind::custom)
        throw ParameterError("initial must be gaussian or wavepacket in a config file");
    if (snapshots < 0)
        throw ParameterError("snapshots must be >= 0");
    if (records < 0)
        throw ParameterError("records must be >= 0");
    for (double v : sweep_dx)
        if (!(v > 0.0))
            throw ParameterError("sweep.dx entries must be > 0");
    for (double v : sweep_dt)
        if (!(v > 0.0))
            throw ParameterError("sweep.dt entries must be > 0");
    if (reference == ReferenceMode::airy && (model.alpha != 0.0 || model.c != 0.0))
        throw ParameterError("reference airy requires alpha = 0 and c = 0");
    (void)make_grid(*this);
}

RunConfig preset(std::string_view name) {
    RunConfig c;
    c.name = std::string(name);
    c.sweep_dx = {std::ldexp(1.0, -7), std::ldexp(1.0, -8), std::ldexp(1.0, -9), std::ldexp(1.0, -10)};
    c.sweep_dt = {4e-2, 2e-2, 1e-2, 5e-3};
    if (name == "case1") {
        c.model = {0.0, 0.0, 1e-3};
    } else if (name == "case2") {
        c.model = {0.0, 1e-3, 1e-3};
    } else if (name == "case3") {
        c.model = {2.0, 1e-3, 1e-3};
        c.initial = InitialKind::wavepacket;
    } else if (name == "longtime") {
        c.model = {0.0, 0.0, 1e-3};
        c.dt = 0.1;
        c.dx = std::ldexp(1.0, -10);
        c.T = 50.0;
        c.kernel_mode = KernelMode::asymptotic;
        c.reference = ReferenceMode::none;
    } else {
        throw ParameterError("unknown preset '" + std::string(name) + "' (case1, case2, case3, longtime)");
    }
    return c;
}

std::vector<std::string> preset_names() { return {"case1", "case2", "case3", "longtime"}; }

std::string config_to_json(const RunConfig& c) {
    json j;
    j["name"] = c.name;
    j["model"] = {{"c", c.model.c}, {"alpha", c.model.alpha}, {"eps", c.model.eps}};
    j["grid"] = {{"x_left", c.x_left}, {"x_right", c.x_right}, {"dx", c.dx}, {"dt", c.dt}, {"T", c.T}};
    j["initial"] = std::string(to_string(c.initial));
    j["kernel_mode"] = std::string(to_string(c.kernel_mode));
    j["reference"] = std::string(to_string(c.reference));
    j["output"] = {{"dir", c.out_dir}, {"snapshots", c.snapshots}, {"records", c.records}};
    j["sweep"] = {{"dx", c.sweep_dx}, {"dt", c.sweep_dt}};
    j["spectral"] = {{"domain_factor", c.spectral.domain_factor},
                     {"max_domain_factor", c.spectral.max_domain_factor},
                     {"min_modes", c.spectral.min_modes},
                     {"cutoff", c.spectral.cutoff}};
    return j.dump(2);
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : keys)
            ok = ok || it.key() == k;
        if (!ok)
            throw ParameterError("unknown config key '" + where + it.key() + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key))
        return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParameterError("config key '" + where + key + "' has the wrong type");
    }
}

} // namespace

RunConfig config_from_json(const std::string& text, const RunConfig& base) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParameterError("config must be a JSON object");
    reject_unknown(j, {"name", "model", "grid", "initial", "kernel_mode", "reference", "output", "sweep", "spectral"}, "");
    RunConfig c = base;
    read(j, "name", c.name, "");
    if (j.contains("model")) {
        const json& m = j["model"];
        reject_unknown(m, {"c", "alpha", "eps"}, "model.");
        read(m, "c", c.model.c, "model.");
        read(m, "alpha", c.model.alpha, "model.");
        read(m, "eps", c.model.eps, "model.");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, {"x_left", "x_right", "dx", "dt", "T"}, "grid.");
        read(g, "x_left", c.x_left, "grid.");
        read(g, "x_right", c.x_right, "grid.");
        read(g, "dx", c.dx, "grid.");
        read(g, "dt", c.dt, "grid.");
        read(g, "T", c.T, "grid.");
    }
    std::string s;
    if (j.contains("initial")) {
        read(j, "initial", s, "");
        c.initial = parse_initial_kind(s);
    }
    if (j.contains("kernel_mode")) {
        read(j, "kernel_mode", s, "");
        c.kernel_mode = parse_kernel_mode(s);
    }
    if (j.contains("reference")) {
        read(j, "reference", s, "");
        c.reference = parse_reference_mode(s);
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, {"dir", "snapshots", "records"}, "output.");
        read(o, "dir", c.out_dir, "output.");
        read(o, "snapshots", c.snapshots, "output.");
        read(o, "records", c.records, "output.");
    }
    if (j.contains("sweep")) {
        const json& w = j["sweep"];
        reject_unknown(w, {"dx", "dt"}, "sweep.");
        read(w, "dx", c.sweep_dx, "sweep.");
        read(w, "dt", c.sweep_dt, "sweep.");
    }
    if (j.contains("spectral")) {
        const json& w = j["spectral"];
        reject_unknown(w, {"domain_factor", "max_domain_factor", "min_modes", "cutoff"}, "spectral.");
        read(w, "domain_factor", c.spectral.domain_factor, "spectral.");
        read(w, "max_domain_factor", c.spectral.max_domain_factor, "spectral.");
        read(w, "min_modes", c.spectral.min_modes, "spectral.");
        read(w, "cutoff", c.spectral.cutoff, "spectral.");
    }
    return c;
}

RunConfig load_config(const fs::path& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str(), base);
}

Grid make_grid(const RunConfig& cfg) {
    if (!(cfg.dt > 0.0))
        throw ParameterError("dt must be > 0");
    if (!(cfg.T > 0.0))
        throw ParameterError("T must be > 0");
    const double steps = cfg.T / cfg.dt;
    if (steps > 1e8)
        throw ParameterError("T/dt too large");
    const int N = static_cast<int>(std::lround(steps));
    if (std::abs(N * cfg.dt - cfg.T) > 1e-9 * cfg.T)
        throw ParameterError("T must be a multiple of dt");
    return Grid::make(cfg.x_left, cfg.x_right, cfg.dx, cfg.dt, N);
}

Kernels asymptotic_kernels(const ModelParams& model, const Grid& grid, std::size_t length) {
    if (model.alpha == 0.0)
        return assemble_lkdv_kernels(model, grid.dt, grid.dx, length);
    return assemble_general_kernels(model, grid.dt, grid.dx, length);
}

KernelSelection select_kernels(const RunConfig& cfg, const Grid& grid, std::size_t length) {
    const SchemeRatios r = derive_ratios(cfg.model, grid);
    KernelMode mode = cfg.kernel_mode;
    std::string reason;
    if (mode == KernelMode::automatic) {
        const double cond = recurrence_condition(r);
        const double small = grid.dx * grid.dx * grid.dx / (cfg.model.eps * grid.dt);
        if (cond > 1e10) {
            mode = KernelMode::asymptotic;
            reason = "auto: recurrence condition " + format_double(cond) + " > 1e10";
        } else if (small < 1e-10) {
            mode = KernelMode::asymptotic;
            reason = "auto: dx^3/(eps dt) = " + format_double(small) + " < 1e-10";
        } else {
            mode = KernelMode::exact;
            reason = "auto: recurrence condition " + format_double(cond);
        }
    } else {
        reason = std::string(to_string(mode)) + " requested";
    }
    KernelSelection sel;
    sel.reason = reason;
    sel.kernels = mode == KernelMode::exact ? generate_exact_kernels(r, length)
                                            : asymptotic_kernels(cfg.model, grid, length);
    return sel;
}

fs::path output_root(const std::string& explicit_dir) {
    if (!explicit_dir.empty())
        return explicit_dir;
    if (const char* env = std::getenv("TBC_OUT_DIR"); env && *env)
        return env;
    return "out";
}

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os)
        throw Error("cannot write '" + p.string() + "'");
    return os;
}

void write_outputs(const RunConfig& cfg, const CaseResult& res, const Kernels& kernels) {
    const fs::path& dir = res.dir;
    fs::create_directories(dir);
    const Grid& g = res.grid;
    const RunReport& rep = res.report;
    {
        auto os = open_out(dir / "snapshots.csv");
        os << "t,x,u\n";
        for (const auto& s : rep.snapshots)
            for (int j = 0; j <= g.J; ++j)
                os << format_double(s.t) << ',' << format_double(g.x(j)) << ','
                   << format_double(s.u[static_cast<std::size_t>(j)]) << '\n';
    }
    {
        auto os = open_out(dir / "report.csv");
        os << "step,t,err,energy\n";
        auto it = rep.errors.begin();
        for (std::size_t n = 0; n < rep.energy.size(); ++n) {
            os << n << ',' << format_double(g.t(static_cast<int>(n))) << ',';
            if (it != rep.errors.end() && static_cast<std::size_t>(it->step) == n) {
                os << format_double(it->err);
                ++it;
            }
            os << ',' << format_double(rep.energy[n]) << '\n';
        }
    }
    {
        auto os = open_out(dir / "kernels.csv");
        write_kernels_csv(os, kernels);
    }
    {
        json j;
        j["config"] = json::parse(config_to_json(cfg));
        j["grid"] = {{"J", g.J}, {"N", g.N}};
        j["kernels"] = {{"provenance", std::string(to_string(kernels.provenance))},
                        {"variant", std::string(to_string(kernels.variant))},
                        {"selection", res.kernel_reason},
                        {"length", kernels.size()}};
        j["E_P"] = rep.E_P ? json(*rep.E_P) : json(nullptr);
        j["final_energy"] = rep.energy.back();
        j["initial_energy"] = rep.energy.front();
        j["max_abs_u"] = rep.max_abs_u;
        j["max_residual_ratio"] = rep.max_residual_ratio;
        j["wall_seconds"] = rep.wall_seconds;
        j["warnings"] = rep.warnings;
        auto os = open_out(dir / "report.json");
        os << j.dump(2) << '\n';
    }
}

} // namespace

CaseResult run_case(const RunConfig& cfg, const fs::path& dir) {
    try {
        cfg.validate();
        CaseResult res;
        res.grid = make_grid(cfg);
        res.dir = dir;
        const Grid& g = res.grid;
        const Profile profile = builtin_profile(cfg.initial);
        const Field u0 = sample_initial(profile, g);

        KernelSelection sel = select_kernels(cfg, g, static_cast<std::size_t>(g.N) + 2);
        res.kernel_reason = sel.reason;

        RunOptions opt;
        opt.snapshots = cfg.snapshots;
        opt.records = cfg.records;
        if (cfg.reference == ReferenceMode::spectral) {
            auto prop = std::make_shared<SpectralPropagator>(u0, cfg.model, g, cfg.spectral);
            opt.reference = [prop](double t) { return prop->at(t); };
        } else if (cfg.reference == ReferenceMode::airy) {
            const ModelParams m = cfg.model;
            opt.reference = [profile, m, g](double t) { return reference_airy(profile, t, m, g); };
        }
        res.report = run(cfg.model, g, sel.kernels, u0, opt);
        res.report.config_echo = config_to_json(cfg);
        if (!dir.empty())
            write_outputs(cfg, res, sel.kernels);
        return res;
    } catch (const ParameterError& e) {
        throw ParameterError("[" + cfg.name + "] " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("[" + cfg.name + "] " + e.what());
    }
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << "h,E_P,order\n";
    for (const auto& r : rows)
        os << format_double(r.h) << ',' << format_double(r.E_P) << ',' << (r.order ? format_double(*r.order) : "")
           << '\n';
}

SweepResult run_sweep(const RunConfig& cfg, SweepAxis axis, int jobs, const fs::path& dir) {
    const std::vector<double>& values = axis == SweepAxis::dx ? cfg.sweep_dx : cfg.sweep_dt;
    if (values.size() < 3)
        throw ParameterError(">= 3 values required for a sweep");
    const char* tag = axis == SweepAxis::dx ? "dx" : "dt";

    std::vector<double> ep(values.size(), std::nan(""));
    std::vector<std::string> fail(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            RunConfig c = cfg;
            (axis == SweepAxis::dx ? c.dx : c.dt) = values[i];
            c.name = cfg.name + "_" + tag + "_" + format_double(values[i]);
            try {
                const fs::path sub = dir.empty() ? fs::path() : dir / (std::string(tag) + "_" + format_double(values[i]));
                const CaseResult r = run_case(c, sub);
                if (r.report.E_P)
                    ep[i] = *r.report.E_P;
                else
                    fail[i] = "no reference error recorded";
            } catch (const std::exception& e) {
                fail[i] = e.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    SweepResult res;
    res.axis = axis;
    res.failures = fail;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < values.size(); ++i)
        pts.emplace_back(values[i], ep[i]);
    res.table = convergence_table(pts);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!fail[i].empty())
            res.table[i].note = fail[i];
    if (!dir.empty()) {
        fs::create_directories(dir);
        auto os = open_out(dir / (std::string("convergence_") + tag + ".csv"));
        write_convergence_csv(os, res.table);
    }
    return res;
}

void export_kernels(const RunConfig& cfg, std::size_t N, std::ostream& os) {
    cfg.model.validate();
    if (N == 0)
        throw ParameterError("kernel export needs N >= 1");
    const Grid g = Grid::make(cfg.x_left, cfg.x_right, cfg.dx, cfg.dt, 0);
    const SchemeRatios r = derive_ratios(cfg.model, g);
    const Kernels ex = generate_exact_kernels(r, N);
    const Kernels as = asymptotic_kernels(cfg.model, g, N);
    os << "n,ss_exact,ps_exact,su_exact,pu_exact,ss_asymptotic,ps_asymptotic,su_asymptotic,pu_asymptotic\n";
    for (std::size_t n = 0; n < N; ++n)
        os << n << ',' << format_double(ex.ss[n]) << ',' << format_double(ex.ps[n]) << ',' << format_double(ex.su[n])
           << ',' << format_double(ex.pu[n]) << ',' << format_double(as.ss[n]) << ',' << format_double(as.ps[n]) << ','
           << format_double(as.su[n]) << ',' << format_double(as.pu[n]) << '\n';
}

std::vector<StabilityRow> stability_sweep(const RunConfig& cfg, int n_theta, std::size_t kernel_length) {
    if (n_theta < 2)
        throw ParameterError("stability sweep needs >= 2 angles");
    const Grid g = Grid::make(cfg.x_left, cfg.x_right, cfg.dx, cfg.dt, 0);
    const SchemeRatios r = derive_ratios(cfg.model, g);
    const Kernels k = select_kernels(cfg, g, kernel_length).kernels;
    std::vector<StabilityRow> rows;
    const double lo = 1e-3, hi = std::numbers::pi - 1e-3;
    for (int i = 0; i < n_theta; ++i) {
        const double th = lo + (hi - lo) * i / (n_theta - 1);
        const Dissipativity d = dissipativity_matrices(th, kernel_symbols(k, std::polar(1.0, th)), r);
        rows.push_back({th, d.min_eig_s, d.min_eig_u});
    }
    return rows;
}

} // namespace kdvtbc
