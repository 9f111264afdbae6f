// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Criteria 7/8/11 share one full-scale characteristic-function run
// (10001 samples per frame), which dominates the runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "polwork/analytics.hpp"
#include "polwork/bath.hpp"
#include "polwork/evolve.hpp"
#include "polwork/generator.hpp"
#include "polwork/specfun.hpp"
#include "polwork/system.hpp"
#include "polwork/workdist.hpp"

using namespace polwork;
namespace fs = std::filesystem;

namespace {

const system::DriveProtocol fig_protocol{0.1, -100.0, 100.0, 1.0};
const bath::BathParams fig_bath{0.4, 10.0, 1.0, true};

struct Shared {
    // full-scale distributions, filled by criterion 7
    workdist::DensityGrid pme_density, wcme_density;
    workdist::WorkDistribution pme_dist, wcme_dist;
    bool have_distributions = false;
};

int checked = 0, failed = 0;

void report(int n, const char* name, bool pass, const std::string& detail, double seconds) {
    ++checked;
    if (!pass) ++failed;
    std::printf("criterion %2d  %-28s %s  (%.1f s)  %s\n", n, name, pass ? "PASS" : "FAIL",
                seconds, detail.c_str());
    std::fflush(stdout);
}

void run(int n, const char* name, const std::function<std::pair<bool, std::string>()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = fn();
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(n, name, pass, detail, dt);
}

double kappa_quadrature(const bath::BathParams& b) {
    // kappa = exp(-2 int_0^inf dw J(w) coth(beta w / 2) / w^2)
    auto f = [&](double w) {
        if (w <= 0.0) return 2.0 * b.alpha / (b.beta * b.omega_c * b.omega_c);
        return bath::spectral_density(w, b) / (w * w) / std::tanh(0.5 * b.beta * w);
    };
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, 0.0, 50.0 * b.omega_c, 10, 1e-12);
    return std::exp(-2.0 * integral);
}

std::pair<bool, std::string> c1_kappa() {
    double worst = 0.0;
    std::ostringstream det;
    for (const double a : {0.05, 0.2, 0.4}) {
        bath::BathParams b = fig_bath;
        b.alpha = a;
        const double closed = bath::kappa(b);
        const double quad = kappa_quadrature(b);
        const double rel = std::abs(closed - quad) / quad;
        worst = std::max(worst, rel);
        det << "kappa(" << a << ")=" << closed << " ";
    }
    det << "max rel dev " << worst;
    return {worst < 1e-6, det.str()};
}

std::pair<bool, std::string> c2_normalization() {
    const evolve::SolverOptions opts;
    double worst = 0.0;
    for (const auto frame : {system::Frame::Polaron, system::Frame::WeakCoupling}) {
        const auto ctx = generator::GeneratorContext::make(frame, fig_protocol, fig_bath);
        const Mat2C k = evolve::integrate_wco(0.0, ctx, opts);
        worst = std::max(worst, std::abs(trace(k) - 1.0));
    }
    std::ostringstream det;
    det << "max |Phi(0) - 1| = " << worst;
    return {worst < 1e-8, det.str()};
}

std::pair<bool, std::string> c3_jarzynski() {
    const evolve::SolverOptions opts;
    const auto ctx =
        generator::GeneratorContext::make(system::Frame::Polaron, fig_protocol, fig_bath);
    const auto sym = workdist::jarzynski_check(ctx, opts);

    system::DriveProtocol asym_protocol = fig_protocol;
    asym_protocol.t_f = 50.0;
    const auto ctx2 =
        generator::GeneratorContext::make(system::Frame::Polaron, asym_protocol, fig_bath);
    const auto asym = workdist::jarzynski_check(ctx2, opts);

    std::ostringstream det;
    det << "symmetric dev " << sym.deviation << ", asymmetric dev " << asym.deviation;
    return {sym.deviation < 1e-3 && asym.deviation < 1e-3, det.str()};
}

std::pair<bool, std::string> c4_fixed_point() {
    system::DriveProtocol still = fig_protocol;
    still.nu = 0.0;
    const auto ctx = generator::GeneratorContext::make(system::Frame::Polaron, still, fig_bath);
    const evolve::SolverOptions opts;
    const Mat2C pi_eq = generator::equilibrium_state(still.t_i, ctx);
    std::vector<double> times;
    for (double t = still.t_i; t <= still.t_f + 1e-9; t += 10.0) times.push_back(t);
    const auto traj = evolve::evolve_density(ctx, opts, pi_eq, times);
    double worst = 0.0;
    for (const auto& rho : traj.states) worst = std::max(worst, max_norm(rho - pi_eq));
    std::ostringstream det;
    det << "max drift " << worst << " over 200 time units";
    return {worst < 1e-6, det.str()};
}

std::pair<bool, std::string> c5_work_generator() {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ut(-100.0, 100.0), ue(-3.0, 3.0);
    const double kappa = bath::kappa(fig_bath);
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = ut(rng);
        const cplx eta = i % 10 == 0 ? cplx{0.0, fig_bath.beta} : cplx{ue(rng), 0.0};
        const Mat2C m =
            system::work_generator(t, eta, fig_protocol, system::Frame::Polaron, kappa);
        const Mat2C d_exp =
            (1.0 / (2.0 * h)) *
            (system::exp_ih(t + h, eta, fig_protocol, system::Frame::Polaron, kappa) -
             system::exp_ih(t - h, eta, fig_protocol, system::Frame::Polaron, kappa));
        const Mat2C fd =
            d_exp * system::exp_ih(t, -eta, fig_protocol, system::Frame::Polaron, kappa);
        worst = std::max(worst, max_norm(m - fd));
    }
    std::ostringstream det;
    det << "max |closed form - finite difference| = " << worst;
    return {worst < 1e-6, det.str()};
}

std::pair<bool, std::string> c6_closed_limit() {
    bath::BathParams feeble = fig_bath;
    feeble.alpha = 1e-4;
    const auto ctx =
        generator::GeneratorContext::make(system::Frame::Polaron, fig_protocol, feeble);
    evolve::SolverOptions opts;
    const auto grid = evolve::sample_cf(150.0, 0.1, ctx, opts);
    const auto density = workdist::invert_cf(grid, -28.0, 28.0, 89601);
    const auto dist = workdist::bin_distribution(density, 0.05);
    double near_zero = 0.0;
    for (std::size_t b = 0; b < dist.centers.size(); ++b)
        if (std::abs(dist.centers[b]) < 0.5) near_zero += dist.probabilities[b];
    std::ostringstream det;
    det << "mass in |W| < 0.5: " << near_zero;
    return {near_zero >= 0.99, det.str()};
}

std::pair<bool, std::string> c7_peak_geometry(Shared& sh) {
    const double kappa = bath::kappa(fig_bath);
    evolve::SolverOptions opts;
    const double d_eta = 0.05, eta_max = 500.0, d_w = 0.05;
    const double w_lo = -28.0, w_hi = 28.0;
    const auto n_pts = static_cast<std::size_t>(std::round((w_hi - w_lo) / (d_w / 8.0))) + 1;

    const auto pme_ctx =
        generator::GeneratorContext::make(system::Frame::Polaron, fig_protocol, fig_bath);
    const auto pme_grid = evolve::sample_cf(eta_max, d_eta, pme_ctx, opts);
    sh.pme_density = workdist::invert_cf(pme_grid, w_lo, w_hi, n_pts);
    sh.pme_dist = workdist::bin_distribution(sh.pme_density, d_w);

    const auto wc_ctx =
        generator::GeneratorContext::make(system::Frame::WeakCoupling, fig_protocol, fig_bath);
    const auto wc_grid = evolve::sample_cf(eta_max, d_eta, wc_ctx, opts);
    sh.wcme_density = workdist::invert_cf(wc_grid, w_lo, w_hi, n_pts);
    sh.wcme_dist = workdist::bin_distribution(sh.wcme_density, d_w);
    sh.have_distributions = true;

    // optional artifact dump for offline inspection of the full-scale runs
    if (const char* dir = std::getenv("POLWORK_ACCEPT_DUMP")) {
        std::filesystem::create_directories(dir);
        for (const auto& [name, dist] :
             {std::pair<const char*, const workdist::WorkDistribution&>{"pme_dist.csv",
                                                                        sh.pme_dist},
              {"wcme_dist.csv", sh.wcme_dist}}) {
            std::ofstream out(std::filesystem::path(dir) / name);
            for (std::size_t b = 0; b < dist.centers.size(); ++b)
                out << dist.centers[b] << ',' << dist.probabilities[b] << '\n';
        }
    }

    // a target peak is hit if the binned distribution has a local maximum
    // within +-2 bins of the predicted work value; the nearest local maximum
    // inside a +-10 bin search window is reported either way
    auto peak_hit = [&](const workdist::WorkDistribution& dist, double w_target,
                        double& w_found) {
        w_found = std::numeric_limits<double>::quiet_NaN();
        double best_dev = std::numeric_limits<double>::infinity();
        for (std::size_t b = 1; b + 1 < dist.centers.size(); ++b) {
            if (std::abs(dist.centers[b] - w_target) > 10.0 * d_w) continue;
            if (dist.probabilities[b] <= dist.probabilities[b - 1] ||
                dist.probabilities[b] <= dist.probabilities[b + 1])
                continue;
            const double dev = std::abs(dist.centers[b] - w_target);
            if (dev < best_dev) {
                best_dev = dev;
                w_found = dist.centers[b];
            }
        }
        return best_dev <= 2.0 * d_w + 1e-12;
    };

    const double de = 10.0;
    double w1, w2, w3;
    const bool p_lower = peak_hit(sh.pme_dist, de - kappa, w1);
    const bool p_upper = peak_hit(sh.pme_dist, de + kappa, w2);
    const bool wc_peak = peak_hit(sh.wcme_dist, de - 1.0, w3);
    std::ostringstream det;
    det << "PME peaks at " << w1 << ", " << w2 << " (targets " << de - kappa << ", "
        << de + kappa << "); WCME peak at " << w3 << " (target " << de - 1.0 << ")";
    return {p_lower && p_upper && wc_peak, det.str()};
}

std::pair<bool, std::string> c8_enhancement(const Shared& sh) {
    if (!sh.have_distributions) return {false, "full-scale distributions unavailable"};
    auto window_mass = [](const workdist::WorkDistribution& dist) {
        double m = 0.0;
        for (std::size_t b = 0; b < dist.centers.size(); ++b)
            if (std::abs(dist.centers[b] - 10.0) <= 0.25) m += dist.probabilities[b];
        return m;
    };
    const double pme = window_mass(sh.pme_dist);
    const double wcme = window_mass(sh.wcme_dist);
    std::ostringstream det;
    det << "mass near W = 10: PME " << pme << ", WCME " << wcme << ", ratio "
        << (wcme > 0.0 ? pme / wcme : std::numeric_limits<double>::infinity());
    return {pme >= 100.0 * wcme && pme > 0.0, det.str()};
}

std::pair<bool, std::string> c9_moment_ordering() {
    evolve::SolverOptions opts;
    bool ok = true;
    std::ostringstream det;
    for (const double a : {0.1, 0.25, 0.4}) {
        bath::BathParams b = fig_bath;
        b.alpha = a;
        workdist::Moments m[2];
        int i = 0;
        for (const auto frame : {system::Frame::Polaron, system::Frame::WeakCoupling}) {
            const auto ctx = generator::GeneratorContext::make(frame, fig_protocol, b);
            m[i++] = workdist::moments_from_cf(evolve::sample_cf(0.02, 0.01, ctx, opts));
        }
        ok = ok && m[0].mean >= m[1].mean && m[0].variance >= m[1].variance;
        det << "a=" << a << ": <W> " << m[0].mean << ">=" << m[1].mean << ", var "
            << m[0].variance << ">=" << m[1].variance << "; ";
    }
    return {ok, det.str()};
}

std::pair<bool, std::string> c10_kms() {
    const auto ctx =
        generator::GeneratorContext::make(system::Frame::Polaron, fig_protocol, fig_bath);
    double worst = 0.0;
    for (const double w : {0.44, 1.0, 3.0, 8.0}) {
        const double bw = std::exp(-fig_bath.beta * w);
        worst = std::max(worst, std::abs(ctx.table->gxx(-w) / (ctx.table->gxx(w) * bw) - 1.0));
        worst = std::max(worst, std::abs(ctx.table->gyy(-w) / (ctx.table->gyy(w) * bw) - 1.0));
    }
    std::ostringstream det;
    det << "max relative KMS violation " << worst;
    return {worst < 1e-4, det.str()};
}

std::pair<bool, std::string> c11_hygiene(const Shared& sh) {
    if (!sh.have_distributions) return {false, "full-scale distributions unavailable"};
    const double norm_dev = sh.pme_dist.normalization_deficit;
    const double neg_frac = -sh.pme_density.most_negative() / sh.pme_density.peak();

    // CF-route mean from a fine grid near eta = 0
    evolve::SolverOptions opts;
    const auto ctx =
        generator::GeneratorContext::make(system::Frame::Polaron, fig_protocol, fig_bath);
    const auto mc = workdist::moments_from_cf(evolve::sample_cf(0.02, 0.01, ctx, opts));
    const auto md = workdist::moments_from_distribution(sh.pme_dist);
    const double mean_dev =
        std::abs(mc.mean - md.mean) / std::max(std::abs(mc.mean), 1.0 / fig_bath.beta);

    std::ostringstream det;
    det << "normalization deficit " << norm_dev << ", negativity/peak " << neg_frac
        << ", mean dev " << mean_dev;
    return {norm_dev < 0.01 && neg_frac < 0.01 && mean_dev < 0.01, det.str()};
}

std::pair<bool, std::string> c12_determinism() {
#ifdef POLWORK_CLI_PATH
    const std::string cli = POLWORK_CLI_PATH;
    const fs::path d1 = fs::temp_directory_path() / "polwork_acc_det1";
    const fs::path d2 = fs::temp_directory_path() / "polwork_acc_det2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    const std::string args =
        " cf --protocol.t-i=-20 --protocol.t-f=20 --cf.eta-max=1 --cf.delta-eta=0.25"
        " --table.points=128";
    auto slurp = [](const fs::path& p) {
        std::ifstream is(p);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    int rc1 = std::system((cli + args + " --solver.threads=1 --out.dir=" + d1.string() +
                           " > /dev/null 2>&1").c_str());
    int rc2 = std::system((cli + args + " --solver.threads=8 --out.dir=" + d2.string() +
                           " > /dev/null 2>&1").c_str());
    const bool same = slurp(d1 / "cf.csv") == slurp(d2 / "cf.csv");
    const bool ok = rc1 == 0 && rc2 == 0 && same && !slurp(d1 / "cf.csv").empty();
    fs::remove_all(d1);
    fs::remove_all(d2);
    return {ok, same ? "thread budgets 1 and 8 byte-identical" : "outputs differ"};
#else
    return {false, "CLI path not wired into the build"};
#endif
}

}  // namespace

int main() {
    Shared sh;
    run(1, "kappa consistency", c1_kappa);
    run(2, "CF normalization", c2_normalization);
    run(3, "Jarzynski equality", c3_jarzynski);
    run(4, "thermal fixed point", c4_fixed_point);
    run(5, "work-generator oracle", c5_work_generator);
    run(6, "closed-system limit", c6_closed_limit);
    run(7, "peak geometry", [&] { return c7_peak_geometry(sh); });
    run(8, "nonadiabatic enhancement", [&] { return c8_enhancement(sh); });
    run(9, "moment ordering", c9_moment_ordering);
    run(10, "KMS detailed balance", c10_kms);
    run(11, "distribution hygiene", [&] { return c11_hygiene(sh); });
    run(12, "determinism", c12_determinism);
    std::printf("%d/%d criteria passed\n", checked - failed, checked);
    return failed;
}
