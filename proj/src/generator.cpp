#include "polwork/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polwork::generator {

GeneratorContext GeneratorContext::make(system::Frame frame,
                                        const system::DriveProtocol& protocol,
                                        const bath::BathParams& b, int n_points) {
    protocol.validate();
    b.validate();
    const double k = bath::kappa(b);
    const double gap = system::kappa_eff(frame, k) * protocol.delta;
    const double w_edge = std::max(std::hypot(protocol.omega0(protocol.t_i), gap),
                                   std::hypot(protocol.omega0(protocol.t_f), gap));
    const double w_lim = 1.5 * w_edge;
    GeneratorContext ctx;
    ctx.frame = frame;
    ctx.protocol = protocol;
    ctx.bath_params = b;
    ctx.kappa = k;
    if (frame == system::Frame::Polaron) {
        ctx.table = std::make_shared<const bath::RateTable>(
            bath::build_rate_table(b, -w_lim, w_lim, n_points, 2.0 * gap));
    } else {
        ctx.table = std::make_shared<const bath::RateTable>(
            bath::build_wc_rate_table(b, -w_lim, w_lim, n_points));
    }
    return ctx;
}

GeneratorContext GeneratorContext::with_table(system::Frame frame,
                                              const system::DriveProtocol& protocol,
                                              const bath::BathParams& b,
                                              std::shared_ptr<const bath::RateTable> table) {
    protocol.validate();
    b.validate();
    if (!table) throw std::invalid_argument("GeneratorContext: null rate table");
    GeneratorContext ctx;
    ctx.frame = frame;
    ctx.protocol = protocol;
    ctx.bath_params = b;
    ctx.table = std::move(table);
    ctx.kappa = frame == system::Frame::Polaron ? ctx.table->kappa_value() : bath::kappa(b);
    return ctx;
}

namespace {

double table_gamma(const bath::RateTable& tab, char channel, double omega) {
    return channel == 'y' ? tab.gyy(omega) : tab.gxx(omega);
}

double table_s(const bath::RateTable& tab, char channel, double omega) {
    return channel == 'y' ? tab.syy(omega) : tab.sxx(omega);
}

}  // namespace

Mat2C lamb_shift_hamiltonian(double t, const GeneratorContext& ctx) {
    if (!ctx.bath_params.include_lamb_shift) return Mat2C::zero();
    const auto ef = system::eigenframe(t, ctx.protocol, ctx.frame, ctx.kappa);
    const auto ops = system::jump_operators(t, ctx.frame, ef, ctx.protocol.delta);
    Mat2C h_ls = Mat2C::zero();
    for (const auto& jo : ops)
        h_ls = h_ls + table_s(*ctx.table, jo.channel, jo.trans_freq) * (adjoint(jo.op) * jo.op);
    return h_ls;
}

Mat2C lindbladian_apply(double t, const Mat2C& x, const GeneratorContext& ctx) {
    const auto ef = system::eigenframe(t, ctx.protocol, ctx.frame, ctx.kappa);
    const auto ops = system::jump_operators(t, ctx.frame, ef, ctx.protocol.delta);
    Mat2C h = system::hamiltonian(t, ctx.protocol, ctx.frame, ctx.kappa);
    if (ctx.bath_params.include_lamb_shift) {
        for (const auto& jo : ops)
            h = h + table_s(*ctx.table, jo.channel, jo.trans_freq) * (adjoint(jo.op) * jo.op);
    }
    Mat2C out = cplx{0.0, -1.0} * commutator(h, x);
    for (const auto& jo : ops) {
        const double rate = table_gamma(*ctx.table, jo.channel, jo.trans_freq);
        const Mat2C ada = adjoint(jo.op) * jo.op;
        out = out + rate * (jo.op * x * adjoint(jo.op) - 0.5 * anticommutator(ada, x));
    }
    return out;
}

Mat2C rhs(double t, const Mat2C& k, cplx eta, const GeneratorContext& ctx) {
    return lindbladian_apply(t, k, ctx) +
           system::work_generator(t, eta, ctx.protocol, ctx.frame, ctx.kappa) * k;
}

Mat2C equilibrium_state(double t, const GeneratorContext& ctx) {
    const auto ef = system::eigenframe(t, ctx.protocol, ctx.frame, ctx.kappa);
    const double x = ctx.bath_params.beta * ef.omega;
    // populations 1/(1+e^{-+ beta omega}) on the adiabatic eigenstates
    const double p_plus = 1.0 / (1.0 + std::exp(x));
    return p_plus * system::projector_plus(ef) + (1.0 - p_plus) * system::projector_minus(ef);
}

}  // namespace polwork::generator
