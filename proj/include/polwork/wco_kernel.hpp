// wco_kernel.hpp — right-hand side of the WCO equation expressed in the
// instantaneous eigenbasis. Algebraically identical to generator::rhs after
// the frame rotation, but free of matrix products and per-step rate-table
// searches (coefficients are pretabulated in t), so it is the kernel the
// integrator actually runs. Equivalence against the reference path is
// enforced by test.

#pragma once

#include <array>
#include <vector>

#include "polwork/generator.hpp"
#include "polwork/mat2.hpp"

namespace polwork::evolve {

/// For Y = U^dag K U (U columns = instantaneous eigenvectors):
///   dY/dt = U^dag (L[K] + M K) U + [Y, U^dag dU/dt].
/// In this basis the Lindbladian couples only populations <-> populations and
/// scales coherences, leaving four real coefficients per time:
/// up/down rates, a dephasing rate and the Lamb-shift splitting.
class EigenKernel {
   public:
    explicit EigenKernel(const generator::GeneratorContext& ctx, double coeff_dt = 0.02);

    /// dy = RHS(t, y) for the WCO in the eigenbasis, counting field eta.
    void operator()(double t, cplx eta, const std::array<cplx, 4>& y,
                    std::array<cplx, 4>& dy) const;

    std::array<cplx, 4> to_eigen(double t, const Mat2C& k) const;
    Mat2C from_eigen(double t, const std::array<cplx, 4>& y) const;

    /// Initial condition: instantaneous Gibbs populations at t_i.
    std::array<cplx, 4> thermal_start() const;

    double t_i() const { return t0_; }
    double t_f() const { return t1_; }

   private:
    void coeffs(double t, double out[4]) const;  // gamma_up, gamma_dn, deph, lamb split

    double t0_, t1_, nu_, gap_, beta_;
    // Catmull-Rom tables on a uniform t grid.
    double grid_t0_, grid_dt_;
    std::vector<std::array<double, 4>> vals_;
    std::vector<std::array<double, 4>> slopes_;  // d(val)/d(index)
};

}  // namespace polwork::evolve
