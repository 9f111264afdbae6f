#include "polwork/wco_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polwork::evolve {

EigenKernel::EigenKernel(const generator::GeneratorContext& ctx, double coeff_dt) {
    if (!(coeff_dt > 0.0)) throw std::invalid_argument("EigenKernel: coeff_dt must be > 0");
    t0_ = ctx.protocol.t_i;
    t1_ = ctx.protocol.t_f;
    nu_ = ctx.protocol.nu;
    gap_ = ctx.kappa_eff() * ctx.protocol.delta;
    beta_ = ctx.bath_params.beta;

    const bool polaron = ctx.frame == system::Frame::Polaron;
    const bool lamb = ctx.bath_params.include_lamb_shift;
    const double q = 0.25 * ctx.protocol.delta * ctx.protocol.delta;
    const auto& tab = *ctx.table;

    const double span = t1_ - t0_;
    const std::size_t n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(span / coeff_dt))) + 1;
    grid_t0_ = t0_;
    grid_dt_ = span / static_cast<double>(n - 1);
    vals_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0_ + grid_dt_ * static_cast<double>(i);
        const double w0 = nu_ * t;
        const double w = std::hypot(w0, gap_);
        const double c2 = (w0 * w0) / (w * w);       // cos^2 theta
        const double s2 = (gap_ * gap_) / (w * w);   // sin^2 theta
        auto& v = vals_[i];
        if (polaron) {
            v[0] = q * (c2 * tab.gxx(-w) + tab.gyy(-w));
            v[1] = q * (c2 * tab.gxx(w) + tab.gyy(w));
            v[2] = q * s2 * tab.gxx(0.0);
            v[3] = lamb ? q * (c2 * (tab.sxx(w) - tab.sxx(-w)) + tab.syy(w) - tab.syy(-w)) : 0.0;
        } else {
            v[0] = s2 * tab.gxx(-w);
            v[1] = s2 * tab.gxx(w);
            v[2] = 0.0;
            v[3] = lamb ? s2 * (tab.sxx(w) - tab.sxx(-w)) : 0.0;
        }
    }
    // Catmull-Rom slopes in index units, one-sided at the ends.
    slopes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == 0)
                slopes_[i][j] = vals_[1][j] - vals_[0][j];
            else if (i + 1 == n)
                slopes_[i][j] = vals_[n - 1][j] - vals_[n - 2][j];
            else
                slopes_[i][j] = 0.5 * (vals_[i + 1][j] - vals_[i - 1][j]);
        }
    }
}

void EigenKernel::coeffs(double t, double out[4]) const {
    double u = (t - grid_t0_) / grid_dt_;
    const double u_max = static_cast<double>(vals_.size() - 1);
    u = std::clamp(u, 0.0, u_max);
    std::size_t i = std::min(static_cast<std::size_t>(u), vals_.size() - 2);
    const double x = u - static_cast<double>(i);
    const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
    const double h10 = x * (1.0 - x) * (1.0 - x);
    const double h01 = x * x * (3.0 - 2.0 * x);
    const double h11 = x * x * (x - 1.0);
    for (int j = 0; j < 4; ++j)
        out[j] = h00 * vals_[i][j] + h10 * slopes_[i][j] + h01 * vals_[i + 1][j] +
                 h11 * slopes_[i + 1][j];
}

void EigenKernel::operator()(double t, cplx eta, const std::array<cplx, 4>& y,
                             std::array<cplx, 4>& dy) const {
    const double w0 = nu_ * t;
    const double w2 = w0 * w0 + gap_ * gap_;
    const double w = std::sqrt(w2);
    const double th_dot = -gap_ * nu_ / w2;
    const double w_dot = nu_ * w0 / w;

    double c[4];
    coeffs(t, c);
    const double g_up = c[0], g_dn = c[1], deph = c[2], dl = c[3];

    const cplx y11 = y[0], y12 = y[1], y21 = y[2], y22 = y[3];

    // Lindbladian: population exchange, coherence decay, level splitting.
    const double gsum_half = 0.5 * (g_up + g_dn);
    const cplx i_split{0.0, w + dl};
    dy[0] = g_up * y22 - g_dn * y11;
    dy[3] = g_dn * y11 - g_up * y22;
    dy[1] = -(i_split + gsum_half + 2.0 * deph) * y12;
    dy[2] = (i_split - gsum_half - 2.0 * deph) * y21;

    // Work term M(t, eta) Y with M in the eigenbasis.
    const cplx ph = std::exp(cplx{0.0, 1.0} * eta * w);
    const cplx m11 = cplx{0.0, 0.5} * eta * w_dot;
    const cplx m12 = 0.5 * th_dot * (ph - 1.0);
    const cplx m21 = 0.5 * th_dot * (1.0 - 1.0 / ph);
    dy[0] += m11 * y11 + m12 * y21;
    dy[1] += m11 * y12 + m12 * y22;
    dy[2] += m21 * y11 - m11 * y21;
    dy[3] += m21 * y12 - m11 * y22;

    // Rotating-frame term [Y, U^dag dU/dt].
    const double g = 0.5 * th_dot;
    dy[0] += g * (y12 + y21);
    dy[1] += g * (y22 - y11);
    dy[2] += g * (y22 - y11);
    dy[3] -= g * (y12 + y21);
}

std::array<cplx, 4> EigenKernel::to_eigen(double t, const Mat2C& k) const {
    const double theta = std::atan2(gap_, nu_ * t);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    // U = [[c, -s], [s, c]]; Y = U^dag K U
    const cplx a = k.m[0], b = k.m[1], d = k.m[2], e = k.m[3];
    return {c * c * a + c * s * (b + d) + s * s * e, c * c * b - c * s * (a - e) - s * s * d,
            c * c * d - c * s * (a - e) - s * s * b, s * s * a - c * s * (b + d) + c * c * e};
}

Mat2C EigenKernel::from_eigen(double t, const std::array<cplx, 4>& y) const {
    const double theta = std::atan2(gap_, nu_ * t);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    // K = U Y U^dag
    const cplx a = y[0], b = y[1], d = y[2], e = y[3];
    return {{c * c * a - c * s * (b + d) + s * s * e, c * c * b + c * s * (a - e) - s * s * d,
             c * c * d + c * s * (a - e) - s * s * b, s * s * a + c * s * (b + d) + c * c * e}};
}

std::array<cplx, 4> EigenKernel::thermal_start() const {
    const double w = std::hypot(nu_ * t0_, gap_);
    const double p_plus = 1.0 / (1.0 + std::exp(beta_ * w));
    return {cplx{p_plus}, cplx{0.0}, cplx{0.0}, cplx{1.0 - p_plus}};
}

}  // namespace polwork::evolve
