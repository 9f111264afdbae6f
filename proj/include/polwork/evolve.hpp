// evolve.hpp — time integration of the work characteristic operator and of
// the eta = 0 density matrix; characteristic-function sampling over the
// counting-field grid.

#pragma once

#include <iosfwd>
#include <vector>

#include "polwork/generator.hpp"
#include "polwork/mat2.hpp"

namespace polwork::evolve {

struct SolverOptions {
    enum class Method { RK45, RK4 };
    Method method{Method::RK45};
    double h0{0.01};       // initial step (RK45) or fixed step (RK4)
    double rtol{1e-8};
    double max_step{0.1};
    int threads{1};        // eta-grid parallelism in sample_cf

    void validate() const;  // throws std::invalid_argument
};

/// Sampled characteristic function Phi(eta) = tr K(t_f, eta) on a uniform
/// eta >= 0 grid. Conjugate symmetry Phi(-eta) = conj(Phi(eta)) supplies the
/// negative half-line on use.
struct CFGrid {
    std::vector<double> etas;
    std::vector<cplx> phis;

    double delta_eta() const;
    void validate() const;  // uniform grid from 0, |Phi| <= 1 + 1e-6

    /// CSV columns: eta, re_phi, im_phi (17 significant digits).
    void write_csv(std::ostream& os) const;
    static CFGrid read_csv(std::istream& is);
};

/// Integrate d/dt K = L_t[K] + M(t, eta) K over [t_i, t_f] starting from the
/// instantaneous Gibbs state at t_i; returns K(t_f, eta) in the computational
/// basis. eta may be complex (eta = i beta gives <e^{-beta W}>). The adaptive
/// step is capped at 0.1/(1 + |eta| nu) to resolve the counting-field phase.
Mat2C integrate_wco(cplx eta, const generator::GeneratorContext& ctx,
                    const SolverOptions& opts);

/// Phi(eta) for eta in {0, delta_eta, ..., eta_max}, parallel over the grid
/// with a deterministic merge (results are written by index).
CFGrid sample_cf(double eta_max, double delta_eta, const generator::GeneratorContext& ctx,
                 const SolverOptions& opts);

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<Mat2C> states;     // computational basis
    std::vector<double> sigma_z;   // <sigma_z>(t)
    double max_trace_error{0.0};
    double min_eigenvalue{0.0};    // most negative eigenvalue seen
};

/// eta = 0 evolution of a density matrix, sampled at the requested times
/// (strictly increasing, within [t_i, t_f]). Reports trace drift and the
/// most negative eigenvalue encountered.
DensityTrajectory evolve_density(const generator::GeneratorContext& ctx,
                                 const SolverOptions& opts, const Mat2C& rho0,
                                 const std::vector<double>& times);

}  // namespace polwork::evolve
