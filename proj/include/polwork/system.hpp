// system.hpp — two-level system geometry: Hamiltonians in both frames,
// instantaneous eigenbasis, jump operators, work superoperator, free
// energies and validity diagnostics.

#pragma once

#include <string>
#include <vector>

#include "polwork/bath.hpp"
#include "polwork/mat2.hpp"

namespace polwork::system {

/// Landau-Zener ramp omega_0(t) = nu * t over [t_i, t_f].
struct DriveProtocol {
    double nu{0.1};      // sweep rate (energy^2)
    double t_i{-100.0};
    double t_f{100.0};
    double delta{1.0};   // bare tunneling coefficient

    double omega0(double t) const { return nu * t; }
    void validate() const;  // throws std::invalid_argument
};

/// Selects the kappa-renormalised polaron Hamiltonian + dissipator, or the
/// bare system Hamiltonian with the weak-coupling dissipator.
enum class Frame { Polaron, WeakCoupling };

/// Instantaneous adiabatic frame at time t.
/// theta = atan2(kappa_eff*Delta, omega_0(t)) in (0, pi), continuous through
/// the avoided crossing; omega(t) = sqrt(omega_0^2 + kappa_eff^2 Delta^2).
struct EigenFrame {
    double theta;
    double omega;
    double dtheta_dt;
    double domega_dt;
};

/// Effective tunneling renormalisation for the chosen frame.
inline double kappa_eff(Frame frame, double kappa) {
    return frame == Frame::Polaron ? kappa : 1.0;
}

EigenFrame eigenframe(double t, const DriveProtocol& protocol, Frame frame, double kappa);

/// H(t) = (1/2) omega_0(t) sigma_z + (1/2) kappa_eff Delta sigma_x.
Mat2C hamiltonian(double t, const DriveProtocol& protocol, Frame frame, double kappa);

/// Adiabatic eigenvectors in the computational basis:
///   |e+> = (cos(theta/2), sin(theta/2)),  |e-> = (-sin(theta/2), cos(theta/2)).
Mat2C projector_plus(const EigenFrame& ef);
Mat2C projector_minus(const EigenFrame& ef);
Mat2C lowering_to_raising(const EigenFrame& ef);  // |e+><e-|

struct JumpOperator {
    char channel;    // 'x' or 'y'
    int index;       // +1, -1 or 0
    Mat2C op;        // in the computational basis
    double trans_freq;  // -omega for index=+1, +omega for -1, 0 for 0
};

/// Polaron frame: A_{x,+/-}, A_{x,0}, A_{y,+/-} per the polaron dissipator;
/// WeakCoupling frame: the single sin(theta)|e+><e-| channel and its adjoint
/// (reported under channel 'x').
std::vector<JumpOperator> jump_operators(double t, Frame frame, const EigenFrame& ef,
                                         double delta);

/// exp(i eta H(t)) in closed form via the spectral decomposition; eta may be
/// complex (eta = i beta gives exp(-beta H)).
Mat2C exp_ih(double t, cplx eta, const DriveProtocol& protocol, Frame frame, double kappa);

/// Work superoperator matrix M(t, eta) = [d/dt exp(i eta H(t))] exp(-i eta H(t)).
Mat2C work_generator(double t, cplx eta, const DriveProtocol& protocol, Frame frame,
                     double kappa);

/// F_PS(t) = -(1/beta) ln(2 cosh(beta omega(t)/2)) with the polaron omega(t).
double free_energy_ps(double t, const DriveProtocol& protocol, double kappa, double beta);

struct ValidityCheck {
    std::string name;
    double value;
    enum class Status { Pass, Warn, Fail } status;
};

struct ValidityReport {
    double g;  // polaron perturbation parameter (Delta/2) sqrt((1+kappa^4)/2)
    std::vector<ValidityCheck> checks;
    bool all_pass() const;
    bool any_fail() const;
};

/// Ratios g/omega_c, nu/(2 Delta^2 kappa^2), nu/(2 omega_c), beta^2 g^2,
/// flagged Pass below 0.1, Warn below 0.5, Fail above.
ValidityReport validity_report(const DriveProtocol& protocol, const bath::BathParams& b,
                               double kappa);

}  // namespace polwork::system
