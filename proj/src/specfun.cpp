#include "polwork/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace polwork::specfun {

namespace {
// B_2 .. B_16
constexpr double kBernoulli[8] = {1.0 / 6.0,  -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                  5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};
}  // namespace

std::complex<double> trigamma(std::complex<double> z) {
    if (std::abs(z.imag()) < 1e-12 && z.real() < 0.5 &&
        std::abs(z.real() - std::round(z.real())) < 1e-12) {
        throw std::domain_error("trigamma: pole at non-positive integer");
    }
    std::complex<double> acc{0.0, 0.0};
    while (z.real() < 10.0) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // psi1(z) ~ 1/z + 1/(2z^2) + sum_k B_2k / z^(2k+1)
    const std::complex<double> r = 1.0 / z;
    const std::complex<double> r2 = r * r;
    std::complex<double> s = r + 0.5 * r2;
    std::complex<double> p = r * r2;
    for (const double b : kBernoulli) {
        s += b * p;
        p *= r2;
    }
    return acc + s;
}

double bose_occupation(double omega, double beta) {
    if (omega == 0.0) throw std::domain_error("bose_occupation: omega = 0");
    const double x = beta * omega;
    if (std::abs(x) < 1e-8) return 1.0 / x - 0.5;
    return 1.0 / std::expm1(x);
}

}  // namespace polwork::specfun
