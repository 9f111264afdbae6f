// spline.hpp — natural cubic spline on a non-uniform grid.

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace polwork {

/// Natural cubic spline through (x_i, y_i) with strictly increasing x.
/// Value type T may be double or std::complex<double>.
template <typename T>
class CubicSpline {
   public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<T> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 points");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("CubicSpline: x not increasing");

        // Solve tridiagonal system for second derivatives, natural BCs.
        m_.assign(n, T{});
        std::vector<T> rhs(n, T{});
        std::vector<double> diag(n, 1.0), sub(n, 0.0), sup(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        // Thomas algorithm.
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

    T operator()(double x) const {
        if (x < x_.front() || x > x_.back())
            throw std::out_of_range("CubicSpline: evaluation outside grid");
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - x_.begin());
        i = std::min(std::max<std::size_t>(i, 1), x_.size() - 1) - 1;
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - x) / h;
        const double b = (x - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h / 6.0);
    }

    const std::vector<double>& knots() const { return x_; }
    const std::vector<T>& values() const { return y_; }

    /// Exact \int e^{i omega x} s(x) dx over the full grid.  Each interval holds
    /// a cubic, so the antiderivative is available in closed form; where
    /// |omega| h is small the closed form cancels and a fixed Gauss-Legendre
    /// rule (exact for the near-polynomial integrand) is used instead.
    std::complex<double> oscillatory_integral(double omega) const {
        using C = std::complex<double>;
        // 7-point Gauss-Legendre nodes/weights on [-1, 1]
        static constexpr double gn[7] = {-0.9491079123427585, -0.7415311855993945,
                                         -0.4058451513773972, 0.0,
                                         0.4058451513773972,  0.7415311855993945,
                                         0.9491079123427585};
        static constexpr double gw[7] = {0.1294849661688697, 0.2797053914892766,
                                         0.3818300505051189, 0.4179591836734694,
                                         0.3818300505051189, 0.2797053914892766,
                                         0.1294849661688697};
        C total{};
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
            const double h = x_[i + 1] - x_[i];
            // local cubic p(u) = c0 + c1 u + c2 u^2 + c3 u^3, u = x - x_i
            const T c0 = y_[i];
            const T c3 = (m_[i + 1] - m_[i]) / (6.0 * h);
            const T c2 = 0.5 * m_[i];
            const T c1 = (y_[i + 1] - y_[i]) / h - h * (2.0 * m_[i] + m_[i + 1]) / 6.0;
            C seg{};
            if (std::abs(omega) * h < 1.0) {
                for (int k = 0; k < 7; ++k) {
                    const double u = 0.5 * h * (1.0 + gn[k]);
                    const T p = c0 + u * (c1 + u * (c2 + u * c3));
                    seg += (0.5 * h * gw[k]) * (C(p) * std::polar(1.0, omega * u));
                }
            } else {
                const C z{0.0, omega};
                const C iz = 1.0 / z, iz2 = iz * iz, iz3 = iz2 * iz, iz4 = iz2 * iz2;
                auto anti = [&](double u, const C& e) {
                    const T p = c0 + u * (c1 + u * (c2 + u * c3));
                    const T dp = c1 + u * (2.0 * c2 + 3.0 * u * c3);
                    const T d2p = 2.0 * c2 + 6.0 * u * c3;
                    const T d3p = 6.0 * c3;
                    return e * (C(p) * iz - C(dp) * iz2 + C(d2p) * iz3 - C(d3p) * iz4);
                };
                seg = anti(h, std::polar(1.0, omega * h)) - anti(0.0, C{1.0, 0.0});
            }
            total += std::polar(1.0, omega * x_[i]) * seg;
        }
        return total;
    }

   private:
    std::vector<double> x_;
    std::vector<T> y_;
    std::vector<T> m_;  // second derivatives at knots
};

}  // namespace polwork
