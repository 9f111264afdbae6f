// specfun.hpp — special functions for the bath machinery.

#pragma once

#include <complex>

namespace polwork::specfun {

/// Complex trigamma psi^(1)(z). Upward recurrence psi1(z) = psi1(z+1) + 1/z^2
/// until Re(z) >= 10, then the asymptotic Bernoulli series (8 terms).
/// Accurate to at least 12 significant digits away from the poles.
/// Throws std::domain_error at the poles (non-positive integers, tol 1e-12).
std::complex<double> trigamma(std::complex<double> z);

/// Bose-Einstein occupation N(omega) = 1/(exp(beta*omega) - 1).
/// Uses the series limit 1/(beta*omega) - 1/2 for |beta*omega| < 1e-8.
/// Throws std::domain_error at omega = 0.
double bose_occupation(double omega, double beta);

}  // namespace polwork::specfun
