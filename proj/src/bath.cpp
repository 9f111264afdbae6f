#include "polwork/bath.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "polwork/specfun.hpp"

namespace polwork::bath {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = 3.14159265358979323846;

/// Adaptive GK15 over [a, b], split into half-oscillation-period chunks when
/// the phase e^{i omega tau} winds more than a few times across the interval.
template <typename F>
double integrate_oscillatory(F&& f, double a, double b, double omega_abs) {
    int n_chunks = 1;
    if (omega_abs * (b - a) > 10.0) {
        n_chunks = 1 + static_cast<int>(omega_abs * (b - a) / kPi);
    }
    const double h = (b - a) / n_chunks;
    double total = 0.0;
    for (int i = 0; i < n_chunks; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == n_chunks) ? b : x0 + h;
        total += gauss_kronrod<double, 15>::integrate(f, x0, x1, 12, 1e-11);
    }
    return total;
}

/// Closed-form full-line Fourier transform of the bath propagator phi(t):
///   4 pi (J(|w|)/w^2) (coth(beta|w|/2) + sign(w)), continuous at w = 0.
double ft_phi(double w, const BathParams& b) {
    if (std::abs(w) < 1e-12) return 8.0 * kPi * b.alpha / (b.beta * b.omega_c * b.omega_c);
    const double aw = std::abs(w);
    // coth(x)+1 = 2/(1-e^{-2x}), coth(x)-1 = 2/(e^{2x}-1); no cancellation.
    const double factor = (w > 0.0) ? 2.0 / (-std::expm1(-b.beta * aw))
                                    : 2.0 / std::expm1(b.beta * aw);
    return 4.0 * kPi * (spectral_density(aw, b) / (w * w)) * factor;
}

double correlation_tau_max(const BathParams& b) {
    const double cap = 50.0 * std::max(1.0 / b.omega_c, b.beta);
    double t = std::max(1.0 / b.omega_c, b.beta);
    while (t < cap && std::abs(bath_propagator(t, b)) > 1e-10) t *= 1.5;
    return std::min(t, cap);
}

/// Splined remainder correlation kernels over [0, tau_max]:
///   XX: cosh(phi) - 1 (fast-decaying), YY: sinh(phi) - phi (the slow
///   one-phonon part of the YY channel is handled by ft_phi instead).
struct CorrelationWorkspace {
    BathParams params;
    double kap{1.0};
    double tau_max{1.0};
    CubicSpline<cplx> r_xx, r_yy;

    explicit CorrelationWorkspace(const BathParams& b) : params(b) {
        kap = kappa(b);
        tau_max = correlation_tau_max(b);

        const double f = std::min(1.0 / b.omega_c, b.beta);  // finest structure scale
        std::vector<double> knots;
        auto add_segment = [&knots](double a, double c, double h) {
            if (c <= a) return;
            const int n = std::max(2, static_cast<int>(std::ceil((c - a) / h)));
            const double step = (c - a) / n;
            for (int i = (knots.empty() ? 0 : 1); i <= n; ++i) knots.push_back(a + i * step);
            if (knots.empty()) knots.push_back(a);
        };
        knots.push_back(0.0);
        const double b1 = std::min(5.0 * f, tau_max);
        const double b2 = std::min(50.0 * f, tau_max);
        add_segment(0.0, b1, f / 256.0);
        add_segment(b1, b2, f / 16.0);
        add_segment(b2, tau_max, std::min(1.0, std::max(b.beta, 1.0 / b.omega_c)) / 16.0);

        // mirror to [-tau_max, tau_max] via C(-tau) = conj(C(tau)) so the
        // natural end conditions land where the kernel has already decayed;
        // a one-sided spline would pick up an O(h^2) error at tau = 0 where
        // the curvature is largest, which ruins the e^{-beta w} suppressed tail
        const std::size_t np = knots.size();
        std::vector<double> full(2 * np - 1);
        std::vector<cplx> yx(2 * np - 1), yy(2 * np - 1);
        for (std::size_t i = 0; i < np; ++i) {
            const cplx p = bath_propagator(knots[i], params);
            const cplx vx = std::cosh(p) - 1.0;
            const cplx vy = std::sinh(p) - p;
            full[np - 1 + i] = knots[i];
            yx[np - 1 + i] = vx;
            yy[np - 1 + i] = vy;
            full[np - 1 - i] = -knots[i];
            yx[np - 1 - i] = std::conj(vx);
            yy[np - 1 - i] = std::conj(vy);
        }
        r_xx = CubicSpline<cplx>(full, std::move(yx));
        r_yy = CubicSpline<cplx>(std::move(full), std::move(yy));
    }

    double gamma(double w, Channel ch) const {
        // the remainder kernels are cubic splines in tau, so the full-line
        // Fourier integral is available interval-by-interval in closed form
        const CubicSpline<cplx>& r = (ch == Channel::XX) ? r_xx : r_yy;
        const double base = (ch == Channel::YY) ? ft_phi(w, params) : 0.0;
        return kap * kap * (base + r.oscillatory_integral(w).real());
    }
};

/// (1/2pi) p.v. int g(x)/(w - x) dx with symmetric-window subtraction:
/// the |x - w| < L part becomes int_0^L [g(w-u) - g(w+u)]/u du (finite),
/// tails are integrated explicitly over the remaining support [lo, hi].
double pv_hilbert(double w, const std::function<double(double)>& g, double L, double lo,
                  double hi) {
    auto sym = [&](double u) { return (g(w - u) - g(w + u)) / u; };
    double total = 0.0;
    // geometric chunking from the singularity outwards
    double a = 0.0;
    for (const double frac : {1e-3, 1e-2, 1e-1, 1.0}) {
        const double c = L * frac;
        total += gauss_kronrod<double, 15>::integrate(sym, a, c, 12, 1e-10);
        a = c;
    }
    if (w + L < hi) {
        auto tail = [&](double x) { return g(x) / (w - x); };
        total += gauss_kronrod<double, 15>::integrate(tail, w + L, hi, 12, 1e-10);
    }
    if (w - L > lo) {
        auto tail = [&](double x) { return g(x) / (w - x); };
        total += gauss_kronrod<double, 15>::integrate(tail, lo, w - L, 12, 1e-10);
    }
    return total / (2.0 * kPi);
}

/// Support over which a rate function is non-negligible: exponential cutoff
/// on the positive side, additional e^{-beta|w|} suppression on the negative.
void rate_support(const BathParams& b, double grid_extent, double* lo, double* hi) {
    *hi = 22.0 * b.omega_c + grid_extent;
    *lo = -(40.0 / b.beta + 2.0 * b.omega_c + grid_extent * 0.0);
}

double pv_window(double w, const BathParams& b) { return 5.0 * std::max(std::abs(w), b.omega_c); }

std::vector<double> graded_grid(double wmin, double wmax, int n, double d) {
    const double lo_d = std::max(wmin, -d);
    const double hi_d = std::min(wmax, d);
    const double len_dense = std::max(0.0, hi_d - lo_d);
    const double len_coarse = (wmax - wmin) - len_dense;
    const double h = (len_coarse + 4.0 * len_dense) / n;

    std::vector<double> g;
    auto add = [&g](double a, double c, double step) {
        if (c <= a + 1e-14) return;
        const int m = std::max(1, static_cast<int>(std::ceil((c - a) / step)));
        const double s = (c - a) / m;
        for (int i = (g.empty() ? 0 : 1); i <= m; ++i) g.push_back(a + i * s);
        if (g.size() == 1 && g[0] != a) g.insert(g.begin(), a);
    };
    g.push_back(wmin);
    add(wmin, lo_d, h);
    add(lo_d, std::min(hi_d, 0.0), h / 4.0);  // split at 0 so it is a grid node
    add(std::max(lo_d, 0.0), hi_d, h / 4.0);
    add(hi_d, wmax, h);
    return g;
}

/// Dense internal gamma spline used as the p.v. integrand; graded knots:
/// fine where the rates have structure, coarse on the exponential tails.
CubicSpline<double> dense_gamma_spline(const std::function<double(double)>& gamma_fn,
                                       const BathParams& b, double lo, double hi,
                                       double fine_halfwidth) {
    std::vector<double> knots;
    auto add = [&knots](double a, double c, double step) {
        if (c <= a + 1e-14) return;
        const int m = std::max(1, static_cast<int>(std::ceil((c - a) / step)));
        const double s = (c - a) / m;
        for (int i = (knots.empty() ? 0 : 1); i <= m; ++i) knots.push_back(a + i * s);
    };
    const double mid = 3.0 * b.omega_c + fine_halfwidth;
    knots.push_back(lo);
    add(lo, -fine_halfwidth, b.omega_c / 16.0);
    add(-fine_halfwidth, fine_halfwidth, 0.02);
    add(fine_halfwidth, std::min(mid, hi), b.omega_c / 64.0);
    add(std::min(mid, hi), hi, b.omega_c / 4.0);

    std::vector<double> vals(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) vals[i] = gamma_fn(knots[i]);
    return {std::move(knots), std::move(vals)};
}

std::function<double(double)> clamped(const CubicSpline<double>& sp) {
    return [&sp](double x) { return (x < sp.x_min() || x > sp.x_max()) ? 0.0 : sp(x); };
}

}  // namespace

void BathParams::validate() const {
    if (alpha < 0.0) throw std::invalid_argument("BathParams: alpha must be >= 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument("BathParams: omega_c must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("BathParams: beta must be > 0");
}

double spectral_density(double omega, const BathParams& b) {
    if (omega < 0.0) throw std::invalid_argument("spectral_density: omega must be >= 0");
    return b.alpha * omega * omega * omega / (b.omega_c * b.omega_c) *
           std::exp(-omega / b.omega_c);
}

double kappa(const BathParams& b) {
    b.validate();
    if (b.alpha == 0.0) return 1.0;
    const double eps = b.epsilon();
    const double psi1 = specfun::trigamma(cplx{eps, 0.0}).real();
    return std::exp(-2.0 * b.alpha * (2.0 * eps * eps * psi1 - 1.0));
}

cplx bath_propagator(double t, const BathParams& b) {
    const double eps = b.epsilon();
    const cplx u{1.0, -b.omega_c * t};
    const cplx psi_sum = specfun::trigamma(cplx{eps, t / b.beta}) +
                         specfun::trigamma(cplx{eps, -t / b.beta});
    return -4.0 * b.alpha * (1.0 / (u * u) - eps * eps * psi_sum);
}

cplx corr(double t, Channel ch, const BathParams& b) {
    const double k = kappa(b);
    const cplx p = bath_propagator(t, b);
    if (ch == Channel::XX) return k * k * (std::cosh(p) - 1.0);
    return k * k * std::sinh(p);
}

double gamma_rate(double omega, Channel ch, const BathParams& b) {
    b.validate();
    if (b.alpha == 0.0) return 0.0;
    const double k = kappa(b);
    const double tmax = correlation_tau_max(b);
    auto f = [&](double tau) {
        const cplx p = bath_propagator(tau, b);
        const cplx v = (ch == Channel::XX) ? (std::cosh(p) - 1.0) : (std::sinh(p) - p);
        return std::cos(omega * tau) * v.real() - std::sin(omega * tau) * v.imag();
    };
    const double base = (ch == Channel::YY) ? ft_phi(omega, b) : 0.0;
    return k * k * (base + 2.0 * integrate_oscillatory(f, 0.0, tmax, std::abs(omega)));
}

double wc_gamma_rate(double omega, const BathParams& b) {
    if (omega == 0.0) return 0.0;
    const double aw = std::abs(omega);
    const double j = spectral_density(aw, b);
    if (omega > 0.0) return 2.0 * kPi * j * (1.0 + specfun::bose_occupation(aw, b.beta));
    return 2.0 * kPi * j * specfun::bose_occupation(aw, b.beta);
}

double lamb_s(double omega, Channel ch, const BathParams& b) {
    b.validate();
    if (b.alpha == 0.0) return 0.0;
    const CorrelationWorkspace ws(b);
    double lo, hi;
    rate_support(b, std::abs(omega), &lo, &hi);
    auto gfn = [&](double x) { return (x < lo || x > hi) ? 0.0 : ws.gamma(x, ch); };
    return pv_hilbert(omega, gfn, pv_window(omega, b), lo, hi);
}

RateTable::RateTable(std::vector<double> omega_grid, std::vector<double> gamma_xx,
                     std::vector<double> gamma_yy, std::vector<double> s_xx,
                     std::vector<double> s_yy, double kappa_value)
    : grid_(std::move(omega_grid)),
      gamma_xx_(std::move(gamma_xx)),
      gamma_yy_(std::move(gamma_yy)),
      s_xx_(std::move(s_xx)),
      s_yy_(std::move(s_yy)),
      kappa_(kappa_value) {
    const std::size_t n = grid_.size();
    if (n < 3 || gamma_xx_.size() != n || gamma_yy_.size() != n || s_xx_.size() != n ||
        s_yy_.size() != n)
        throw std::invalid_argument("RateTable: inconsistent column lengths");
    for (double g : gamma_xx_)
        if (g < -1e-10) throw std::invalid_argument("RateTable: negative gamma_xx entry");
    for (double g : gamma_yy_)
        if (g < -1e-10) throw std::invalid_argument("RateTable: negative gamma_yy entry");
    gxx_ = CubicSpline<double>(grid_, gamma_xx_);
    gyy_ = CubicSpline<double>(grid_, gamma_yy_);
    sxx_ = CubicSpline<double>(grid_, s_xx_);
    syy_ = CubicSpline<double>(grid_, s_yy_);
}

void RateTable::write_csv(std::ostream& os) const {
    os << "omega,gamma_xx,gamma_yy,s_xx,s_yy\n";
    char buf[160];
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", grid_[i],
                      gamma_xx_[i], gamma_yy_[i], s_xx_[i], s_yy_[i]);
        os << buf;
    }
}

RateTable RateTable::read_csv(std::istream& is, double kappa_value) {
    std::vector<double> w, gx, gy, sx, sy;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        std::istringstream ls(line);
        double v[5];
        char comma;
        ls >> v[0];
        for (int i = 1; i < 5; ++i) ls >> comma >> v[i];
        if (!ls) throw std::runtime_error("RateTable: malformed CSV line: " + line);
        w.push_back(v[0]);
        gx.push_back(v[1]);
        gy.push_back(v[2]);
        sx.push_back(v[3]);
        sy.push_back(v[4]);
    }
    return {std::move(w), std::move(gx), std::move(gy), std::move(sx), std::move(sy),
            kappa_value};
}

RateTable build_rate_table(const BathParams& b, double omega_min, double omega_max, int n_points,
                           double dense_halfwidth) {
    b.validate();
    if (n_points < 64) throw std::invalid_argument("build_rate_table: n_points must be >= 64");
    if (!(omega_min < 0.0 && omega_max > 0.0))
        throw std::invalid_argument("build_rate_table: window must bracket omega = 0");
    const double k = kappa(b);
    if (dense_halfwidth <= 0.0) dense_halfwidth = 2.0 * k;

    std::vector<double> grid = graded_grid(omega_min, omega_max, n_points, dense_halfwidth);
    const std::size_t n = grid.size();
    std::vector<double> gx(n, 0.0), gy(n, 0.0), sx(n, 0.0), sy(n, 0.0);
    if (b.alpha == 0.0)
        return {std::move(grid), std::move(gx), std::move(gy), std::move(sx), std::move(sy), 1.0};

    const CorrelationWorkspace ws(b);
    for (std::size_t i = 0; i < n; ++i) {
        gx[i] = std::max(0.0, ws.gamma(grid[i], Channel::XX));
        gy[i] = std::max(0.0, ws.gamma(grid[i], Channel::YY));
    }

    const double extent = std::max(std::abs(omega_min), std::abs(omega_max));
    double lo, hi;
    rate_support(b, extent, &lo, &hi);
    const auto dxx = dense_gamma_spline([&](double x) { return ws.gamma(x, Channel::XX); }, b,
                                        lo, hi, dense_halfwidth + 1.0);
    const auto dyy = dense_gamma_spline([&](double x) { return ws.gamma(x, Channel::YY); }, b,
                                        lo, hi, dense_halfwidth + 1.0);
    const auto gxx_fn = clamped(dxx);
    const auto gyy_fn = clamped(dyy);
    for (std::size_t i = 0; i < n; ++i) {
        const double L = pv_window(grid[i], b);
        sx[i] = pv_hilbert(grid[i], gxx_fn, L, lo, hi);
        sy[i] = pv_hilbert(grid[i], gyy_fn, L, lo, hi);
    }
    return {std::move(grid), std::move(gx), std::move(gy), std::move(sx), std::move(sy), k};
}

RateTable build_wc_rate_table(const BathParams& b, double omega_min, double omega_max,
                              int n_points) {
    b.validate();
    if (n_points < 64) throw std::invalid_argument("build_wc_rate_table: n_points must be >= 64");
    if (!(omega_min < 0.0 && omega_max > 0.0))
        throw std::invalid_argument("build_wc_rate_table: window must bracket omega = 0");

    std::vector<double> grid = graded_grid(omega_min, omega_max, n_points, 2.0);
    const std::size_t n = grid.size();
    std::vector<double> gx(n, 0.0), gy(n, 0.0), sx(n, 0.0), sy(n, 0.0);
    if (b.alpha == 0.0)
        return {std::move(grid), std::move(gx), std::move(gy), std::move(sx), std::move(sy), 1.0};

    for (std::size_t i = 0; i < n; ++i) gx[i] = wc_gamma_rate(grid[i], b);

    const double extent = std::max(std::abs(omega_min), std::abs(omega_max));
    double lo, hi;
    rate_support(b, extent, &lo, &hi);
    auto gfn = [&](double x) { return (x < lo || x > hi) ? 0.0 : wc_gamma_rate(x, b); };
    for (std::size_t i = 0; i < n; ++i)
        sx[i] = pv_hilbert(grid[i], gfn, pv_window(grid[i], b), lo, hi);
    return {std::move(grid), std::move(gx), std::move(gy), std::move(sx), std::move(sy), 1.0};
}

}  // namespace polwork::bath
