#include "polwork/workdist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "polwork/system.hpp"

namespace polwork::workdist {

double DensityGrid::peak() const {
    return w.empty() ? 0.0 : *std::max_element(p.begin(), p.end());
}

double DensityGrid::most_negative() const {
    return w.empty() ? 0.0 : std::min(0.0, *std::min_element(p.begin(), p.end()));
}

void DensityGrid::write_dat(std::ostream& os) const {
    char buf[64];
    for (std::size_t j = 0; j < w.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", w[j], p[j]);
        os << buf;
    }
}

DensityGrid invert_cf(const evolve::CFGrid& grid, double w_min, double w_max,
                      std::size_t n_points, Window window) {
    grid.validate();
    if (grid.etas.size() < 2) throw std::invalid_argument("invert_cf: need >= 2 CF samples");
    if (!(w_max > w_min)) throw std::invalid_argument("invert_cf: need w_max > w_min");
    if (n_points < 2) throw std::invalid_argument("invert_cf: need >= 2 density points");
    const double d_eta = grid.delta_eta();
    const double w_cap = 0.9 * std::numbers::pi / d_eta;
    if (std::max(std::abs(w_min), std::abs(w_max)) > w_cap)
        throw std::invalid_argument("invert_cf: W range exceeds the aliasing bound 0.9 pi/d_eta");

    const std::size_t n = grid.etas.size();
    const double eta_max = grid.etas.back();
    std::vector<double> re(n), im(n);
    for (std::size_t k = 0; k < n; ++k) {
        double wt = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        if (window == Window::Hann)
            wt *= 0.5 * (1.0 + std::cos(std::numbers::pi * grid.etas[k] / eta_max));
        wt *= d_eta / std::numbers::pi;
        re[k] = wt * grid.phis[k].real();
        im[k] = wt * grid.phis[k].imag();
    }

    DensityGrid out;
    out.w.resize(n_points);
    out.p.resize(n_points);
    const double h = (w_max - w_min) / static_cast<double>(n_points - 1);
    for (std::size_t j = 0; j < n_points; ++j) out.w[j] = w_min + h * static_cast<double>(j);
    kernels::cf_sum_auto(re.data(), im.data(), n, d_eta, out.w.data(), n_points, out.p.data());
    return out;
}

namespace {

/// Integral of the piecewise-linear density from w.front() to x (clamped).
double linear_cumulative(const DensityGrid& g, double x) {
    const auto& w = g.w;
    const auto& p = g.p;
    x = std::clamp(x, w.front(), w.back());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (x <= w[i]) break;
        const double hi = std::min(x, w[i + 1]);
        const double frac = (hi - w[i]) / (w[i + 1] - w[i]);
        const double p_hi = p[i] + frac * (p[i + 1] - p[i]);
        acc += 0.5 * (p[i] + p_hi) * (hi - w[i]);
    }
    return acc;
}

}  // namespace

WorkDistribution bin_distribution(const DensityGrid& density, double delta_w) {
    if (density.w.size() < 2) throw std::invalid_argument("bin_distribution: empty density");
    if (!(delta_w > 0.0)) throw std::invalid_argument("bin_distribution: delta_w must be > 0");
    const double lo = density.w.front(), hi = density.w.back();
    const auto n_bins = static_cast<std::size_t>(std::ceil((hi - lo) / delta_w - 1e-9));

    WorkDistribution dist;
    dist.bin_width = delta_w;
    dist.centers.resize(n_bins);
    dist.probabilities.resize(n_bins);
    double total = 0.0;
    // cumulative integral evaluated at successive edges; differences per bin
    double prev = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        const double edge = std::min(lo + delta_w * static_cast<double>(b + 1), hi);
        const double cum = linear_cumulative(density, edge);
        dist.centers[b] = lo + delta_w * (static_cast<double>(b) + 0.5);
        dist.probabilities[b] = cum - prev;
        prev = cum;
        total += dist.probabilities[b];
        if (dist.probabilities[b] < 0.0) dist.negativity += -dist.probabilities[b];
    }
    dist.normalization_deficit = std::abs(1.0 - total);
    return dist;
}

void WorkDistribution::write_csv(std::ostream& os) const {
    os << "w_center,probability\n";
    char buf[64];
    for (std::size_t b = 0; b < centers.size(); ++b) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", centers[b], probabilities[b]);
        os << buf;
    }
}

Moments moments_from_cf(const evolve::CFGrid& grid) {
    grid.validate();
    if (grid.etas.size() < 3)
        throw std::invalid_argument("moments_from_cf: need >= 3 CF samples");
    const double h = grid.delta_eta();
    if (h > 0.01 + 1e-12)
        throw std::invalid_argument("moments_from_cf: eta spacing must be <= 0.01 near 0");
    // 5-point stencils collapsed with Phi(-eta) = conj(Phi(eta)).
    const cplx p1 = grid.phis[1], p2 = grid.phis[2];
    Moments m;
    m.mean = (8.0 * p1.imag() - p2.imag()) / (6.0 * h);
    const double second = (32.0 * p1.real() - 2.0 * p2.real() - 30.0) / (12.0 * h * h);
    m.variance = -second - m.mean * m.mean;
    return m;
}

Moments moments_from_distribution(const WorkDistribution& dist) {
    if (dist.centers.empty()) throw std::invalid_argument("moments: empty distribution");
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t b = 0; b < dist.centers.size(); ++b) {
        m1 += dist.centers[b] * dist.probabilities[b];
        m2 += dist.centers[b] * dist.centers[b] * dist.probabilities[b];
    }
    return {m1, m2 - m1 * m1};
}

JarzynskiResult jarzynski_check(const generator::GeneratorContext& ctx,
                                const evolve::SolverOptions& opts) {
    const double beta = ctx.bath_params.beta;
    const double k_eff = ctx.kappa_eff();
    const Mat2C k_final = evolve::integrate_wco(cplx{0.0, beta}, ctx, opts);
    const cplx lhs = trace(k_final);
    const double df = system::free_energy_ps(ctx.protocol.t_f, ctx.protocol, k_eff, beta) -
                      system::free_energy_ps(ctx.protocol.t_i, ctx.protocol, k_eff, beta);
    const double rhs = std::exp(-beta * df);
    return {lhs.real(), lhs.imag(), rhs, std::abs(lhs - rhs)};
}

}  // namespace polwork::workdist
