#include "polwork/system.hpp"

#include <cmath>
#include <stdexcept>

namespace polwork::system {

void DriveProtocol::validate() const {
    if (!(t_i < t_f)) throw std::invalid_argument("DriveProtocol: t_i must be < t_f");
    if (nu < 0.0) throw std::invalid_argument("DriveProtocol: nu must be >= 0");
    if (!(delta > 0.0)) throw std::invalid_argument("DriveProtocol: delta must be > 0");
}

EigenFrame eigenframe(double t, const DriveProtocol& protocol, Frame frame, double kappa) {
    const double gap = kappa_eff(frame, kappa) * protocol.delta;
    const double w0 = protocol.omega0(t);
    const double w = std::hypot(w0, gap);
    EigenFrame ef;
    ef.theta = std::atan2(gap, w0);
    ef.omega = w;
    ef.dtheta_dt = -gap * protocol.nu / (w * w);
    ef.domega_dt = protocol.nu * w0 / w;
    return ef;
}

Mat2C hamiltonian(double t, const DriveProtocol& protocol, Frame frame, double kappa) {
    const double gap = kappa_eff(frame, kappa) * protocol.delta;
    return 0.5 * protocol.omega0(t) * sigma_z + 0.5 * gap * sigma_x;
}

Mat2C projector_plus(const EigenFrame& ef) {
    const double c = std::cos(0.5 * ef.theta), s = std::sin(0.5 * ef.theta);
    return {{cplx{c * c}, cplx{c * s}, cplx{c * s}, cplx{s * s}}};
}

Mat2C projector_minus(const EigenFrame& ef) {
    const double c = std::cos(0.5 * ef.theta), s = std::sin(0.5 * ef.theta);
    return {{cplx{s * s}, cplx{-c * s}, cplx{-c * s}, cplx{c * c}}};
}

Mat2C lowering_to_raising(const EigenFrame& ef) {
    const double c = std::cos(0.5 * ef.theta), s = std::sin(0.5 * ef.theta);
    // |e+><e-| with |e+> = (c, s), |e-> = (-s, c)
    return {{cplx{-c * s}, cplx{c * c}, cplx{-s * s}, cplx{s * c}}};
}

std::vector<JumpOperator> jump_operators(double t, Frame frame, const EigenFrame& ef,
                                         double delta) {
    std::vector<JumpOperator> ops;
    const Mat2C pm = lowering_to_raising(ef);  // |e+><e-|
    if (frame == Frame::WeakCoupling) {
        const Mat2C a_plus = std::sin(ef.theta) * pm;
        ops.push_back({'x', +1, a_plus, -ef.omega});
        ops.push_back({'x', -1, adjoint(a_plus), +ef.omega});
        return ops;
    }
    const double half = 0.5 * delta;
    const Mat2C ax_plus = half * std::cos(ef.theta) * pm;
    const Mat2C ax_zero =
        half * std::sin(ef.theta) * (projector_plus(ef) - projector_minus(ef));
    const Mat2C ay_plus = cplx{0.0, -half} * pm;
    ops.push_back({'x', +1, ax_plus, -ef.omega});
    ops.push_back({'x', -1, adjoint(ax_plus), +ef.omega});
    ops.push_back({'x', 0, ax_zero, 0.0});
    ops.push_back({'y', +1, ay_plus, -ef.omega});
    ops.push_back({'y', -1, adjoint(ay_plus), +ef.omega});
    return ops;
}

namespace {
/// Unit Bloch vector of H and its time derivative: n = (sin theta, 0, cos theta).
Mat2C n_dot_sigma(double theta) {
    return std::sin(theta) * sigma_x + std::cos(theta) * sigma_z;
}
}  // namespace

Mat2C exp_ih(double t, cplx eta, const DriveProtocol& protocol, Frame frame, double kappa) {
    const EigenFrame ef = eigenframe(t, protocol, frame, kappa);
    const cplx half_phase = 0.5 * eta * ef.omega;
    return std::cos(half_phase) * Mat2C::identity() +
           cplx{0.0, 1.0} * std::sin(half_phase) * n_dot_sigma(ef.theta);
}

Mat2C work_generator(double t, cplx eta, const DriveProtocol& protocol, Frame frame,
                     double kappa) {
    const EigenFrame ef = eigenframe(t, protocol, frame, kappa);
    const cplx half_phase = 0.5 * eta * ef.omega;
    const cplx c = std::cos(half_phase), s = std::sin(half_phase);
    const Mat2C n = n_dot_sigma(ef.theta);
    const Mat2C dn = std::cos(ef.theta) * sigma_x - std::sin(ef.theta) * sigma_z;
    // d/dt exp(i eta H) with H = (omega/2) n.sigma:
    const Mat2C d_exp = (-0.5 * eta * ef.domega_dt * s) * Mat2C::identity() +
                        cplx{0.0, 1.0} * (0.5 * eta * ef.domega_dt * c) * n +
                        cplx{0.0, 1.0} * (ef.dtheta_dt * s) * dn;
    return d_exp * exp_ih(t, -eta, protocol, frame, kappa);
}

double free_energy_ps(double t, const DriveProtocol& protocol, double kappa, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("free_energy_ps: beta must be > 0");
    const double w = std::hypot(protocol.omega0(t), kappa * protocol.delta);
    // -(1/beta) ln(2 cosh(beta w/2)), written to avoid cosh overflow
    return -(0.5 * w + std::log1p(std::exp(-beta * w)) / beta);
}

bool ValidityReport::all_pass() const {
    for (const auto& c : checks)
        if (c.status != ValidityCheck::Status::Pass) return false;
    return true;
}

bool ValidityReport::any_fail() const {
    for (const auto& c : checks)
        if (c.status == ValidityCheck::Status::Fail) return true;
    return false;
}

ValidityReport validity_report(const DriveProtocol& protocol, const bath::BathParams& b,
                               double kappa) {
    auto flag = [](double v) {
        if (v < 0.1) return ValidityCheck::Status::Pass;
        if (v < 0.5) return ValidityCheck::Status::Warn;
        return ValidityCheck::Status::Fail;
    };
    ValidityReport r;
    const double k2 = kappa * kappa;
    r.g = 0.5 * protocol.delta * std::sqrt(0.5 * (1.0 + k2 * k2));
    const double adiabatic = protocol.nu / (2.0 * protocol.delta * protocol.delta * k2);
    const double checks[4] = {r.g / b.omega_c, adiabatic, protocol.nu / (2.0 * b.omega_c),
                              b.beta * b.beta * r.g * r.g};
    const char* names[4] = {"born_markov g/omega_c", "adiabatic nu/(2 Delta^2 kappa^2)",
                            "eigenbasis_rate nu/(2 omega_c)", "initial_state beta^2 g^2"};
    for (int i = 0; i < 4; ++i) r.checks.push_back({names[i], checks[i], flag(checks[i])});
    return r;
}

}  // namespace polwork::system
