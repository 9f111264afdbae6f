// analytics.hpp — closed-system Landau-Zener references: exact unitary solve
// and asymptotic transition-probability formulas, used as limits and oracles.

#pragma once

#include <array>

#include "polwork/system.hpp"

namespace polwork::analytics {

/// Three-peak closed-system work distribution. Peak order: W = -dE, 0, +dE
/// with dE = (omega_0(t_f) - omega_0(t_i)) / 2.
struct ClosedLZResult {
    double transition_probability;  // adiabatic-basis transition, ground start
    double delta_e;
    double p_minus;                 // initial ground occupation 1/(1+e^{-beta omega(t_i)})
    std::array<double, 3> masses;   // {p_+ P, 1-P, p_- P}; sums to 1
    double norm_error;              // |1 - ||psi(t_f)||| of the Schrodinger solve
};

/// Integrate the Schrodinger equation for H(t) with the given gap
/// renormalisation (RK45, rtol 1e-10) from each initial adiabatic eigenstate
/// and assemble peak masses with thermal initial weights.
ClosedLZResult closed_lz_unitary(const system::DriveProtocol& protocol, double kappa_eff,
                                 double beta);

/// Asymptotic transition probability, both printed conventions.
struct LZAsymptotic {
    double one_minus_exp;  // 1 - e^{-pi Delta^2 kappa_eff^2 / (2 nu)}
    double complement;     // e^{-pi Delta^2 kappa_eff^2 / (2 nu)}
};

LZAsymptotic lz_asymptotic(const system::DriveProtocol& protocol, double kappa_eff);

}  // namespace polwork::analytics
