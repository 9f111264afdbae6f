#include "polwork/evolve.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "polwork/rk.hpp"
#include "polwork/wco_kernel.hpp"

namespace polwork::evolve {

void SolverOptions::validate() const {
    if (!(h0 > 0.0)) throw std::invalid_argument("SolverOptions: h0 must be > 0");
    if (!(rtol > 1e-12 && rtol < 1e-2))
        throw std::invalid_argument("SolverOptions: rtol must lie in (1e-12, 1e-2)");
    if (!(max_step > 0.0)) throw std::invalid_argument("SolverOptions: max_step must be > 0");
    if (threads < 1) throw std::invalid_argument("SolverOptions: threads must be >= 1");
}

double CFGrid::delta_eta() const {
    if (etas.size() < 2) throw std::logic_error("CFGrid: spacing needs >= 2 samples");
    return etas[1] - etas[0];
}

void CFGrid::validate() const {
    if (etas.empty() || etas.size() != phis.size())
        throw std::invalid_argument("CFGrid: empty or mismatched columns");
    if (std::abs(etas.front()) > 1e-12)
        throw std::invalid_argument("CFGrid: grid must start at eta = 0");
    if (etas.size() >= 2) {
        const double d = etas[1] - etas[0];
        if (!(d > 0.0)) throw std::invalid_argument("CFGrid: eta values must increase");
        for (std::size_t k = 1; k < etas.size(); ++k)
            if (std::abs(etas[k] - etas[k - 1] - d) > 1e-9 * std::max(1.0, d))
                throw std::invalid_argument("CFGrid: eta spacing not uniform");
    }
    for (const auto& p : phis)
        if (std::abs(p) > 1.0 + 1e-6)
            throw std::invalid_argument("CFGrid: |Phi| exceeds 1 + 1e-6");
}

void CFGrid::write_csv(std::ostream& os) const {
    os << "eta,re_phi,im_phi\n";
    char buf[96];
    for (std::size_t k = 0; k < etas.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", etas[k], phis[k].real(),
                      phis[k].imag());
        os << buf;
    }
}

CFGrid CFGrid::read_csv(std::istream& is) {
    CFGrid g;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') continue;
        double eta, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &eta, &re, &im) != 3) {
            if (g.etas.empty()) continue;  // header row
            throw std::invalid_argument("CFGrid: malformed CSV line: " + line);
        }
        g.etas.push_back(eta);
        g.phis.emplace_back(re, im);
    }
    g.validate();
    return g;
}

namespace {

std::array<cplx, 4> run_kernel(const EigenKernel& kernel, cplx eta, double t0, double t1,
                               std::array<cplx, 4> y, const SolverOptions& opts, double nu) {
    const double cap = std::min(opts.max_step, 0.1 / (1.0 + std::abs(eta) * nu));
    auto f = [&](double t, const std::array<cplx, 4>& s, std::array<cplx, 4>& ds) {
        kernel(t, eta, s, ds);
    };
    if (opts.method == SolverOptions::Method::RK4) {
        const double h = std::min(opts.h0, cap);
        const long n = static_cast<long>(std::ceil((t1 - t0) / h));
        return rk::integrate_rk4<4>(f, t0, t1, y, n);
    }
    return rk::integrate_rk45<4>(f, t0, t1, y, opts.rtol, 1e-12, std::min(opts.h0, cap), cap);
}

}  // namespace

Mat2C integrate_wco(cplx eta, const generator::GeneratorContext& ctx,
                    const SolverOptions& opts) {
    opts.validate();
    const EigenKernel kernel(ctx);
    auto y = run_kernel(kernel, eta, kernel.t_i(), kernel.t_f(), kernel.thermal_start(), opts,
                        ctx.protocol.nu);
    return kernel.from_eigen(kernel.t_f(), y);
}

CFGrid sample_cf(double eta_max, double delta_eta, const generator::GeneratorContext& ctx,
                 const SolverOptions& opts) {
    opts.validate();
    if (!(eta_max > 0.0) || !(delta_eta > 0.0))
        throw std::invalid_argument("sample_cf: eta_max and delta_eta must be > 0");
    const std::size_t n = static_cast<std::size_t>(std::floor(eta_max / delta_eta + 0.5)) + 1;

    const EigenKernel kernel(ctx);
    CFGrid grid;
    grid.etas.resize(n);
    grid.phis.resize(n);
    for (std::size_t k = 0; k < n; ++k) grid.etas[k] = delta_eta * static_cast<double>(k);

    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(n);
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n) return;
            try {
                auto y = run_kernel(kernel, grid.etas[k], kernel.t_i(), kernel.t_f(),
                                    kernel.thermal_start(), opts, ctx.protocol.nu);
                grid.phis[k] = y[0] + y[3];  // trace is basis independent
            } catch (const std::exception& e) {
                failures[k] = e.what();
            }
        }
    };
    const int n_threads = std::min<int>(opts.threads, static_cast<int>(n));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::ostringstream err;
    int n_failed = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!failures[k].empty()) {
            if (n_failed++ < 5) err << "  eta index " << k << ": " << failures[k] << "\n";
        }
    }
    if (n_failed > 0) {
        std::ostringstream msg;
        msg << "sample_cf: " << n_failed << " eta solve(s) failed\n" << err.str();
        throw std::runtime_error(msg.str());
    }
    return grid;
}

DensityTrajectory evolve_density(const generator::GeneratorContext& ctx,
                                 const SolverOptions& opts, const Mat2C& rho0,
                                 const std::vector<double>& times) {
    opts.validate();
    if (times.empty()) throw std::invalid_argument("evolve_density: no observation times");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("evolve_density: times must be strictly increasing");
    if (times.front() < ctx.protocol.t_i - 1e-12 || times.back() > ctx.protocol.t_f + 1e-12)
        throw std::invalid_argument("evolve_density: times outside [t_i, t_f]");
    if (std::abs(trace(rho0) - 1.0) > 1e-10 || max_norm(rho0 - adjoint(rho0)) > 1e-10)
        throw std::invalid_argument("evolve_density: rho0 must be Hermitian with unit trace");

    const EigenKernel kernel(ctx);
    DensityTrajectory traj;
    traj.min_eigenvalue = 1.0;
    double t = ctx.protocol.t_i;
    auto y = kernel.to_eigen(t, rho0);
    for (const double t_obs : times) {
        if (t_obs > t + 1e-14)
            y = run_kernel(kernel, 0.0, t, t_obs, y, opts, ctx.protocol.nu);
        t = t_obs;
        const Mat2C rho = kernel.from_eigen(t, y);
        traj.times.push_back(t);
        traj.states.push_back(rho);
        traj.sigma_z.push_back((rho.m[0] - rho.m[3]).real());
        traj.max_trace_error = std::max(traj.max_trace_error, std::abs(trace(rho) - 1.0));
        const Mat2C herm = 0.5 * (rho + adjoint(rho));
        traj.min_eigenvalue = std::min(traj.min_eigenvalue, hermitian_eigenvalues(herm)[0]);
    }
    return traj;
}

}  // namespace polwork::evolve
