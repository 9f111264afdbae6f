#include "polwork/analytics.hpp"

#include <cmath>
#include <numbers>

#include "polwork/rk.hpp"

namespace polwork::analytics {

namespace {

/// |<e_-(t_f)|psi>|^2 for psi started in the adiabatic state `excited ? e+ : e-`
/// at t_i, evolved under H(t) = (nu t/2) sigma_z + (gap/2) sigma_x.
struct SchrodingerRun {
    double transition;
    double norm_error;
};

SchrodingerRun schrodinger_transition(const system::DriveProtocol& protocol, double gap,
                                      bool excited) {
    const double nu = protocol.nu;
    auto f = [&](double t, const rk::State<2>& psi, rk::State<2>& dpsi) {
        const double w0 = nu * t;
        // -i H psi
        dpsi[0] = cplx{0.0, -0.5} * (w0 * psi[0] + gap * psi[1]);
        dpsi[1] = cplx{0.0, -0.5} * (gap * psi[0] - w0 * psi[1]);
    };
    const double theta_i = std::atan2(gap, protocol.omega0(protocol.t_i));
    const double ci = std::cos(0.5 * theta_i), si = std::sin(0.5 * theta_i);
    rk::State<2> psi = excited ? rk::State<2>{cplx{ci}, cplx{si}}
                               : rk::State<2>{cplx{-si}, cplx{ci}};
    psi = rk::integrate_rk45<2>(f, protocol.t_i, protocol.t_f, psi, 1e-10, 1e-13, 1e-3, 0.05);

    const double theta_f = std::atan2(gap, protocol.omega0(protocol.t_f));
    const double cf = std::cos(0.5 * theta_f), sf = std::sin(0.5 * theta_f);
    const cplx to_plus = cf * psi[0] + sf * psi[1];
    const cplx to_minus = -sf * psi[0] + cf * psi[1];
    const double norm = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]));
    // transition = overlap with the opposite adiabatic branch
    const double p = excited ? std::norm(to_minus) : std::norm(to_plus);
    return {p, std::abs(1.0 - norm)};
}

}  // namespace

ClosedLZResult closed_lz_unitary(const system::DriveProtocol& protocol, double kappa_eff,
                                 double beta) {
    protocol.validate();
    const double gap = kappa_eff * protocol.delta;
    const auto ground = schrodinger_transition(protocol, gap, false);
    const auto excited = schrodinger_transition(protocol, gap, true);

    ClosedLZResult r;
    r.transition_probability = ground.transition;
    r.delta_e = 0.5 * (protocol.omega0(protocol.t_f) - protocol.omega0(protocol.t_i));
    const double w_i = std::hypot(protocol.omega0(protocol.t_i), gap);
    r.p_minus = 1.0 / (1.0 + std::exp(-beta * w_i));
    r.masses = {(1.0 - r.p_minus) * excited.transition,
                r.p_minus * (1.0 - ground.transition) +
                    (1.0 - r.p_minus) * (1.0 - excited.transition),
                r.p_minus * ground.transition};
    r.norm_error = std::max(ground.norm_error, excited.norm_error);
    return r;
}

LZAsymptotic lz_asymptotic(const system::DriveProtocol& protocol, double kappa_eff) {
    const double gap = kappa_eff * protocol.delta;
    if (protocol.nu <= 0.0) return {1.0, 0.0};  // adiabatic limit: no transition
    const double ex = std::exp(-std::numbers::pi * gap * gap / (2.0 * protocol.nu));
    return {1.0 - ex, ex};
}

}  // namespace polwork::analytics
