// polwork — driven two-level system work statistics at strong reservoir
// coupling: polaron-frame master equation pipeline from bath tables to the
// work distribution.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polwork/analytics.hpp"
#include "polwork/bath.hpp"
#include "polwork/dynamics_bench.hpp"
#include "polwork/evolve.hpp"
#include "polwork/generator.hpp"
#include "polwork/system.hpp"
#include "polwork/workdist.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polwork;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    bath::BathParams bath{0.4, 10.0, 1.0, true};
    system::DriveProtocol protocol{0.1, -100.0, 100.0, 1.0};
    std::string frame = "polaron";
    evolve::SolverOptions solver{};
    double eta_max = 150.0;
    double delta_eta = 0.1;
    double delta_w = 0.05;
    std::string window = "rect";
    double w_min = 0.0, w_max = 0.0;  // 0,0 = auto from the aliasing bound
    int table_points = 512;
    std::string out_dir = "out";

    system::Frame frame_enum() const {
        return frame == "weak" ? system::Frame::WeakCoupling : system::Frame::Polaron;
    }
    workdist::Window window_enum() const {
        return window == "hann" ? workdist::Window::Hann : workdist::Window::Rectangular;
    }

    void validate() const {
        bath.validate();
        protocol.validate();
        solver.validate();
        if (!(eta_max > 0.0) || !(delta_eta > 0.0))
            throw std::invalid_argument("config: cf.eta-max and cf.delta-eta must be > 0");
        if (!(delta_w > 0.0)) throw std::invalid_argument("config: dist.delta-w must be > 0");
    }

    json to_json() const {
        json j;
        j["version"] = kVersion;
        j["bath"] = {{"alpha", bath.alpha},
                     {"omega_c", bath.omega_c},
                     {"beta", bath.beta},
                     {"lamb_shift", bath.include_lamb_shift}};
        j["protocol"] = {{"nu", protocol.nu},
                         {"t_i", protocol.t_i},
                         {"t_f", protocol.t_f},
                         {"delta", protocol.delta}};
        j["frame"] = frame;
        j["solver"] = {{"method",
                        solver.method == evolve::SolverOptions::Method::RK4 ? "rk4" : "rk45"},
                       {"h0", solver.h0},
                       {"rtol", solver.rtol},
                       {"max_step", solver.max_step},
                       {"threads", solver.threads}};
        j["cf"] = {{"eta_max", eta_max}, {"delta_eta", delta_eta}};
        j["dist"] = {{"delta_w", delta_w}, {"window", window}, {"w_min", w_min}, {"w_max", w_max}};
        j["table_points"] = table_points;
        return j;
    }
};

std::string config_placeholder;  // --config is expanded before parsing; shown in help only

/// Expand an INI config file into the equivalent --section.key=value arguments.
/// CLI11's own config reader maps dotted keys onto subcommand paths rather than
/// dotted option names, so the translation is done up front instead.
std::vector<std::string> config_to_args(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read config file: " + path);
    std::vector<std::string> args;
    for (const auto& item : CLI::ConfigINI{}.from_config(is)) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        std::string full;
        for (const auto& p : item.parents) full += p + ".";
        full += item.name;
        if (item.inputs.empty()) args.push_back("--" + full);
        for (const auto& in : item.inputs) args.push_back("--" + full + "=" + in);
    }
    return args;
}

/// Replace every "--config[=| ]FILE" occurrence with the file's expansion, in
/// place, so that flags given after --config still override the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        std::string file;
        if (a.rfind("--config=", 0) == 0) {
            file = a.substr(9);
        } else if (a == "--config" && i + 1 < argc) {
            file = argv[++i];
        } else {
            out.push_back(a);
            continue;
        }
        for (auto& e : config_to_args(file)) out.push_back(std::move(e));
    }
    return out;
}

void add_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--config", config_placeholder,
                    "key-value config file (sections bath/protocol/solver/...)");
    cmd->add_option("--bath.alpha", cfg.bath.alpha, "coupling strength");
    cmd->add_option("--bath.omega-c", cfg.bath.omega_c, "cutoff frequency");
    cmd->add_option("--bath.beta", cfg.bath.beta, "inverse temperature");
    cmd->add_flag("--bath.lamb-shift,!--bath.no-lamb-shift", cfg.bath.include_lamb_shift,
                  "include the Lamb shift");
    cmd->add_option("--protocol.nu", cfg.protocol.nu, "sweep rate");
    cmd->add_option("--protocol.t-i", cfg.protocol.t_i, "initial time");
    cmd->add_option("--protocol.t-f", cfg.protocol.t_f, "final time");
    cmd->add_option("--protocol.delta", cfg.protocol.delta, "bare tunneling");
    cmd->add_option("--frame", cfg.frame, "polaron | weak")
        ->check(CLI::IsMember({"polaron", "weak"}));
    cmd->add_option_function<std::string>(
           "--solver.method",
           [&cfg](const std::string& m) {
               cfg.solver.method = m == "rk4" ? evolve::SolverOptions::Method::RK4
                                              : evolve::SolverOptions::Method::RK45;
           },
           "rk45 | rk4")
        ->check(CLI::IsMember({"rk45", "rk4"}));
    cmd->add_option("--solver.h0", cfg.solver.h0, "initial / fixed step");
    cmd->add_option("--solver.rtol", cfg.solver.rtol, "relative tolerance");
    cmd->add_option("--solver.max-step", cfg.solver.max_step, "step ceiling");
    cmd->add_option("--solver.threads", cfg.solver.threads, "eta-grid thread budget");
    cmd->add_option("--cf.eta-max", cfg.eta_max, "counting-field grid extent");
    cmd->add_option("--cf.delta-eta", cfg.delta_eta, "counting-field step");
    cmd->add_option("--dist.delta-w", cfg.delta_w, "work bin width");
    cmd->add_option("--dist.window", cfg.window, "rect | hann")
        ->check(CLI::IsMember({"rect", "hann"}));
    cmd->add_option("--dist.w-min", cfg.w_min, "density range lower edge (0 0 = auto)");
    cmd->add_option("--dist.w-max", cfg.w_max, "density range upper edge");
    cmd->add_option("--table.points", cfg.table_points, "rate-table grid size")
        ->check(CLI::Range(64, 100000));
    cmd->add_option("--out.dir", cfg.out_dir, "output directory");
}

std::ofstream open_out(const fs::path& p) {
    fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
    std::ofstream os(p);
    if (!os) throw IoError("cannot open output file: " + p.string());
    return os;
}

void write_sidecar(const fs::path& data_file, const RunConfig& cfg, json extra) {
    json j = cfg.to_json();
    j.update(extra);
    fs::path p = data_file;
    p += ".json";
    auto os = open_out(p);
    os << j.dump(2) << "\n";
    if (!os) throw IoError("failed writing " + p.string());
}

generator::GeneratorContext make_context(const RunConfig& cfg) {
    return generator::GeneratorContext::make(cfg.frame_enum(), cfg.protocol, cfg.bath,
                                             cfg.table_points);
}

int cmd_kappa(const RunConfig& cfg) {
    const double k = bath::kappa(cfg.bath);
    const auto report = system::validity_report(cfg.protocol, cfg.bath, k);
    std::printf("kappa   = %.12g\n", k);
    std::printf("g       = %.12g\n", report.g);
    for (const auto& c : report.checks) {
        const char* status = c.status == system::ValidityCheck::Status::Pass   ? "pass"
                             : c.status == system::ValidityCheck::Status::Warn ? "warn"
                                                                               : "FAIL";
        std::printf("%-34s %.4g  [%s]\n", c.name.c_str(), c.value, status);
    }
    return report.any_fail() ? 3 : 0;
}

int cmd_bath_tables(const RunConfig& cfg) {
    const auto ctx = make_context(cfg);
    const fs::path out = fs::path(cfg.out_dir) / "rate_table.csv";
    auto os = open_out(out);
    ctx.table->write_csv(os);
    write_sidecar(out, cfg, {{"kappa", ctx.kappa}});
    std::printf("wrote %s (%zu frequencies)\n", out.string().c_str(), ctx.table->grid().size());
    return 0;
}

int cmd_cf(const RunConfig& cfg) {
    const auto ctx = make_context(cfg);
    const auto grid = evolve::sample_cf(cfg.eta_max, cfg.delta_eta, ctx, cfg.solver);
    const fs::path out = fs::path(cfg.out_dir) / "cf.csv";
    auto os = open_out(out);
    grid.write_csv(os);
    write_sidecar(out, cfg, {{"kappa", ctx.kappa}, {"n_samples", grid.etas.size()}});
    std::printf("wrote %s (%zu samples, Phi(0) = %.10g)\n", out.string().c_str(),
                grid.etas.size(), grid.phis.front().real());
    return 0;
}

int cmd_dist(const RunConfig& cfg, const std::string& input) {
    const fs::path in = input.empty() ? fs::path(cfg.out_dir) / "cf.csv" : fs::path(input);
    std::ifstream is(in);
    if (!is) throw IoError("cannot open CF file: " + in.string());
    const auto grid = evolve::CFGrid::read_csv(is);

    double w_min = cfg.w_min, w_max = cfg.w_max;
    if (w_min == 0.0 && w_max == 0.0) {
        const double cap = 0.9 * 3.14159265358979324 / grid.delta_eta();
        w_min = -cap;
        w_max = cap;
    }
    const auto n_pts =
        static_cast<std::size_t>(std::ceil((w_max - w_min) / (cfg.delta_w / 8.0))) + 1;
    const auto density = workdist::invert_cf(grid, w_min, w_max, n_pts, cfg.window_enum());
    const auto dist = workdist::bin_distribution(density, cfg.delta_w);

    const fs::path out = fs::path(cfg.out_dir) / "dist.csv";
    auto os = open_out(out);
    dist.write_csv(os);
    const fs::path dens_out = fs::path(cfg.out_dir) / "density.dat";
    auto osd = open_out(dens_out);
    density.write_dat(osd);
    write_sidecar(out, cfg,
                  {{"normalization_deficit", dist.normalization_deficit},
                   {"negativity", dist.negativity},
                   {"peak_density", density.peak()},
                   {"cf_input", in.string()},
                   {"simd_kernel", workdist::kernels::avx2_active() ? "avx2" : "scalar"}});
    std::printf("wrote %s (%zu bins, 1 - sum P = %.3g, negativity = %.3g)\n",
                out.string().c_str(), dist.centers.size(), dist.normalization_deficit,
                dist.negativity);
    return 0;
}

int cmd_moments(const RunConfig& cfg, const std::vector<double>& alphas,
                const std::vector<double>& betas) {
    const fs::path out = fs::path(cfg.out_dir) / "moments.csv";
    auto os = open_out(out);
    os << "frame,alpha,beta,mean,variance,mean_per_kT,variance_per_kT2\n";
    for (const char* fr : {"polaron", "weak"}) {
        for (const double a : alphas) {
            for (const double b : betas) {
                RunConfig c = cfg;
                c.frame = fr;
                c.bath.alpha = a;
                c.bath.beta = b;
                const auto ctx = make_context(c);
                // 5-point stencil needs only eta in {0, 0.01, 0.02}
                const auto grid = evolve::sample_cf(0.02, 0.01, ctx, c.solver);
                const auto m = workdist::moments_from_cf(grid);
                char buf[160];
                std::snprintf(buf, sizeof buf, "%s,%g,%g,%.12g,%.12g,%.12g,%.12g\n", fr, a, b,
                              m.mean, m.variance, m.mean * b, m.variance * b * b);
                os << buf;
                std::printf("%s", buf);
            }
        }
    }
    write_sidecar(out, cfg, {{"alphas", alphas}, {"betas", betas}});
    return 0;
}

int cmd_jarzynski(const RunConfig& cfg) {
    const auto ctx = make_context(cfg);
    const auto r = workdist::jarzynski_check(ctx, cfg.solver);
    std::printf("<e^{-beta W}> = %.10g  (imag %.3g)\n", r.lhs, r.lhs_imag);
    std::printf("e^{-beta dF}  = %.10g\n", r.rhs);
    std::printf("deviation     = %.3g\n", r.deviation);
    return r.deviation < 1e-2 ? 0 : 3;
}

int cmd_dynamics(const RunConfig& cfg, double dt, const std::string& reference) {
    std::vector<double> times;
    for (double t = cfg.protocol.t_i; t <= cfg.protocol.t_f + 1e-9; t += dt)
        times.push_back(std::min(t, cfg.protocol.t_f));
    const Mat2C rho0{{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{0.0}}};  // |1><1|
    auto cmp = dynamics_bench::run_comparison(
        cfg.protocol, cfg.bath, rho0,
        {dynamics_bench::Source::PME, dynamics_bench::Source::WCME,
         dynamics_bench::Source::Closed},
        times, cfg.solver);
    if (!reference.empty()) {
        std::ifstream is(reference);
        if (!is) throw IoError("cannot open reference: " + reference);
        dynamics_bench::add_trajectory(cmp, dynamics_bench::import_reference(is, times));
    }
    const fs::path out = fs::path(cfg.out_dir) / "dynamics.json";
    auto os = open_out(out);
    cmp.write_json(os);
    for (const auto& d : cmp.deviations)
        std::printf("max |<sigma_z>| deviation %s vs %s: %.4g\n", d.a.c_str(), d.b.c_str(),
                    d.max_abs);
    return 0;
}

int cmd_closed_lz(const RunConfig& cfg) {
    const double k = cfg.frame_enum() == system::Frame::Polaron ? bath::kappa(cfg.bath) : 1.0;
    const auto r = analytics::closed_lz_unitary(cfg.protocol, k, cfg.bath.beta);
    const auto asym = analytics::lz_asymptotic(cfg.protocol, k);
    std::printf("transition probability (unitary solve) = %.10g\n", r.transition_probability);
    std::printf("asymptotic: 1 - exp form = %.10g, complement = %.10g\n", asym.one_minus_exp,
                asym.complement);
    std::printf("dE = %.10g, p_- = %.10g\n", r.delta_e, r.p_minus);
    std::printf("peak masses (W = -dE, 0, +dE) = %.6g, %.6g, %.6g\n", r.masses[0], r.masses[1],
                r.masses[2]);
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    int failures = 0;
    auto check = [&](const char* name, bool ok, double value) {
        std::printf("%-40s %-4s (%.3g)\n", name, ok ? "pass" : "FAIL", value);
        if (!ok) ++failures;
    };
    const auto ctx = make_context(cfg);
    const auto report = system::validity_report(cfg.protocol, cfg.bath, ctx.kappa);
    for (const auto& c : report.checks)
        check(c.name.c_str(), c.status != system::ValidityCheck::Status::Fail, c.value);

    // KMS on the interpolated table
    double kms = 0.0;
    for (const double w : {0.3, 0.8, 2.0, 5.0}) {
        const double bw = std::exp(-cfg.bath.beta * w);
        kms = std::max(kms, std::abs(ctx.table->gxx(-w) / (ctx.table->gxx(w) * bw) - 1.0));
        if (cfg.frame_enum() == system::Frame::Polaron)
            kms = std::max(kms, std::abs(ctx.table->gyy(-w) / (ctx.table->gyy(w) * bw) - 1.0));
    }
    check("kms_detailed_balance", kms < 1e-4, kms);

    // generator annihilates the instantaneous Gibbs state
    double fixed = 0.0;
    for (const double t : {cfg.protocol.t_i, 0.5 * (cfg.protocol.t_i + cfg.protocol.t_f),
                           cfg.protocol.t_f}) {
        const auto pi_eq = generator::equilibrium_state(t, ctx);
        fixed = std::max(fixed, max_norm(generator::lindbladian_apply(t, pi_eq, ctx)));
    }
    check("gibbs_fixed_point", fixed < 1e-6, fixed);

    // normalization of the characteristic function at eta = 0
    const auto k0 = evolve::integrate_wco(0.0, ctx, cfg.solver);
    const double norm_err = std::abs(trace(k0) - 1.0);
    check("cf_normalization", norm_err < 1e-8, norm_err);

    const auto jz = workdist::jarzynski_check(ctx, cfg.solver);
    check("jarzynski", jz.deviation < 1e-2, jz.deviation);

    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"work statistics of a driven two-level system strongly coupled to a bosonic "
                 "reservoir (polaron master equation pipeline)"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string dist_input, dyn_reference;
    double dyn_dt = 1.0;
    std::vector<double> mom_alphas{0.1, 0.25, 0.4}, mom_betas{1.0};

    auto* kappa_cmd = app.add_subcommand("kappa", "print kappa, g and the validity report");
    auto* tables_cmd = app.add_subcommand("bath-tables", "build and export the rate table");
    auto* cf_cmd = app.add_subcommand("cf", "sample the characteristic function");
    auto* dist_cmd = app.add_subcommand("dist", "invert and bin a sampled CF");
    auto* mom_cmd = app.add_subcommand("moments", "sweep (alpha, beta), emit work moments");
    auto* jz_cmd = app.add_subcommand("jarzynski", "check <e^{-beta W}> = e^{-beta dF}");
    auto* dyn_cmd = app.add_subcommand("dynamics", "population-dynamics comparison");
    auto* lz_cmd = app.add_subcommand("closed-lz", "closed-system Landau-Zener references");
    auto* val_cmd = app.add_subcommand("validate", "run the property suite on this config");
    for (auto* cmd : {kappa_cmd, tables_cmd, cf_cmd, dist_cmd, mom_cmd, jz_cmd, dyn_cmd, lz_cmd,
                      val_cmd})
        add_options(cmd, cfg);
    dist_cmd->add_option("--input", dist_input, "CF csv (default <out.dir>/cf.csv)");
    mom_cmd->add_option("--moments.alphas", mom_alphas, "alpha sweep values");
    mom_cmd->add_option("--moments.betas", mom_betas, "beta sweep values");
    dyn_cmd->add_option("--dynamics.dt", dyn_dt, "observation grid spacing");
    dyn_cmd->add_option("--dynamics.reference", dyn_reference, "external (t, sigma_z) CSV");

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes back-to-front
        app.parse(std::move(args));
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.validate();
        if (kappa_cmd->parsed()) return cmd_kappa(cfg);
        if (tables_cmd->parsed()) return cmd_bath_tables(cfg);
        if (cf_cmd->parsed()) return cmd_cf(cfg);
        if (dist_cmd->parsed()) return cmd_dist(cfg, dist_input);
        if (mom_cmd->parsed()) return cmd_moments(cfg, mom_alphas, mom_betas);
        if (jz_cmd->parsed()) return cmd_jarzynski(cfg);
        if (dyn_cmd->parsed()) return cmd_dynamics(cfg, dyn_dt, dyn_reference);
        if (lz_cmd->parsed()) return cmd_closed_lz(cfg);
        if (val_cmd->parsed()) return cmd_validate(cfg);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
