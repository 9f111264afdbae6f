// generator.hpp — right-hand side of the generalised master equation:
// adiabatic Lindbladian (dissipator + Lamb shift + coherent part) plus the
// work term, for both frames.

#pragma once

#include <memory>

#include "polwork/bath.hpp"
#include "polwork/system.hpp"

namespace polwork::generator {

/// Everything needed to evaluate the generator at any t in [t_i, t_f].
/// Immutable after construction; safe to share across threads.
struct GeneratorContext {
    system::Frame frame{system::Frame::Polaron};
    system::DriveProtocol protocol{};
    bath::BathParams bath_params{};
    std::shared_ptr<const bath::RateTable> table;
    double kappa{1.0};

    double kappa_eff() const { return system::kappa_eff(frame, kappa); }

    /// Build bath tables with the default window [-1.5 w(t_i), +1.5 w(t_i)]
    /// (extended to cover t_f for asymmetric protocols) and n_points grid.
    static GeneratorContext make(system::Frame frame, const system::DriveProtocol& protocol,
                                 const bath::BathParams& b, int n_points = 512);

    /// Reuse an existing table (e.g. loaded from CSV).
    static GeneratorContext with_table(system::Frame frame,
                                       const system::DriveProtocol& protocol,
                                       const bath::BathParams& b,
                                       std::shared_ptr<const bath::RateTable> table);
};

/// L_t[X] = -i[H(t) + H_LS(t), X] + sum_{a,n} gamma_{a,n}(t)
///          (A X A^dag - 1/2 {A^dag A, X}), rates interpolated from the table.
/// X need not be Hermitian. Throws if a transition frequency falls outside
/// the table window.
Mat2C lindbladian_apply(double t, const Mat2C& x, const GeneratorContext& ctx);

/// Lamb-shift Hamiltonian H_LS(t) (zero matrix when disabled by flag).
Mat2C lamb_shift_hamiltonian(double t, const GeneratorContext& ctx);

/// d/dt K = L_t[K] + M(t, eta) K.
Mat2C rhs(double t, const Mat2C& k, cplx eta, const GeneratorContext& ctx);

/// Instantaneous Gibbs state exp(-beta H(t)) / tr exp(-beta H(t)) of the
/// frame Hamiltonian.
Mat2C equilibrium_state(double t, const GeneratorContext& ctx);

}  // namespace polwork::generator
