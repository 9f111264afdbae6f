// rk.hpp — explicit Runge-Kutta integrators on small complex state vectors:
// adaptive Dormand-Prince 5(4) with FSAL, and fixed-step classical RK4.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>

namespace polwork::rk {

using cplx = std::complex<double>;

template <std::size_t N>
using State = std::array<cplx, N>;

namespace detail {

template <std::size_t N>
bool finite(const State<N>& y) {
    for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4). f(t, y, dy) writes the derivative into dy.
/// Integrates from t0 to t1 (t1 > t0); step size is bounded by hmax and the
/// local error estimate; throws std::runtime_error on step underflow or
/// non-finite state. Returns the final state.
template <std::size_t N, typename F>
State<N> integrate_rk45(F&& f, double t0, double t1, State<N> y, double rtol, double atol,
                        double h0, double hmax) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_rk45: need t1 > t0");
    if (!(h0 > 0.0) || !(hmax > 0.0)) throw std::invalid_argument("integrate_rk45: bad step");

    // Butcher tableau (Dormand-Prince 5(4)).
    constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    constexpr double a2[] = {1.0 / 5};
    constexpr double a3[] = {3.0 / 40, 9.0 / 40};
    constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
    constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
    constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                             -5103.0 / 18656};
    constexpr double b5[] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                             -2187.0 / 6784, 11.0 / 84};
    // b5 - b4 (embedded 4th-order error weights, including the FSAL stage).
    constexpr double e[] = {71.0 / 57600,       0.0,          -71.0 / 16695, 71.0 / 1920,
                            -17253.0 / 339200, 22.0 / 525,    -1.0 / 40};

    const double span = t1 - t0;
    const double h_min = 1e-13 * span;
    double t = t0;
    double h = std::min(h0, hmax);
    State<N> k[7], y5, tmp;
    f(t, y, k[0]);

    auto stage = [&](double ti, const double* row, int n_prev, State<N>& out) {
        for (std::size_t i = 0; i < N; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < n_prev; ++j) s += row[j] * k[j][i];
            out[i] = y[i] + h * s;
        }
        f(ti, out, k[n_prev]);
    };

    while (t < t1) {
        if (t1 - t < h_min) break;  // already at the endpoint to within roundoff
        h = std::min(h, t1 - t);
        if (h < h_min) {
            std::ostringstream msg;
            msg << "integrate_rk45: step underflow at t = " << t;
            throw std::runtime_error(msg.str());
        }
        stage(t + c[1] * h, a2, 1, tmp);
        stage(t + c[2] * h, a3, 2, tmp);
        stage(t + c[3] * h, a4, 3, tmp);
        stage(t + c[4] * h, a5, 4, tmp);
        stage(t + c[5] * h, a6, 5, tmp);
        for (std::size_t i = 0; i < N; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < 6; ++j) s += b5[j] * k[j][i];
            y5[i] = y[i] + h * s;
        }
        f(t + h, y5, k[6]);  // FSAL stage
        if (!detail::finite(y5)) {
            std::ostringstream msg;
            msg << "integrate_rk45: non-finite state at t = " << t;
            throw std::runtime_error(msg.str());
        }

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            cplx de = 0.0;
            for (int j = 0; j < 7; ++j) de += e[j] * k[j][i];
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, h * std::abs(de) / scale);
        }

        if (err <= 1.0) {
            t += h;
            y = y5;
            k[0] = k[6];
        } else {
            f(t, y, k[0]);  // k[0] was clobbered only on accept; restore cheaply
        }
        const double factor =
            err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::min(h, hmax);
    }
    return y;
}

/// Fixed-step classical RK4 with n_steps uniform steps over [t0, t1].
template <std::size_t N, typename F>
State<N> integrate_rk4(F&& f, double t0, double t1, State<N> y, long n_steps) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_rk4: need t1 > t0");
    if (n_steps < 1) throw std::invalid_argument("integrate_rk4: need n_steps >= 1");
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    State<N> k1, k2, k3, k4, tmp;
    for (long s = 0; s < n_steps; ++s) {
        const double t = t0 + h * static_cast<double>(s);
        f(t, y, k1);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        f(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        f(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
        f(t + h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!detail::finite(y)) {
            std::ostringstream msg;
            msg << "integrate_rk4: non-finite state at t = " << t + h;
            throw std::runtime_error(msg.str());
        }
    }
    return y;
}

}  // namespace polwork::rk
