// bath.hpp — reservoir machinery: spectral density, polaron renormalisation,
// bath propagator, correlation functions, Fourier-transformed rates and
// principal-value Lamb-shift integrals, cached into interpolable tables.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polwork/mat2.hpp"
#include "polwork/spline.hpp"

namespace polwork::bath {

/// Super-Ohmic reservoir description. Units: hbar = k_B = 1, energies in
/// units of the bare tunneling Delta, times in 1/Delta.
struct BathParams {
    double alpha{0.0};            // dimensionless coupling strength
    double omega_c{1.0};          // cutoff frequency
    double beta{1.0};             // inverse temperature
    bool include_lamb_shift{true};

    double epsilon() const { return 1.0 / (beta * omega_c); }
    void validate() const;  // throws std::invalid_argument
};

enum class Channel { XX, YY };

/// J(omega) = alpha * omega^3 / omega_c^2 * exp(-omega/omega_c), omega >= 0.
double spectral_density(double omega, const BathParams& b);

/// Polaron renormalisation constant, closed form
/// kappa = exp(-2 alpha (2 eps^2 psi1(eps) - 1)) with eps = 1/(beta omega_c).
double kappa(const BathParams& b);

/// Bath propagator phi(t) =
///   -4 alpha [ (1 - i omega_c t)^-2 - eps^2 (psi1(eps + it/beta) + psi1(eps - it/beta)) ].
cplx bath_propagator(double t, const BathParams& b);

/// Interaction correlation functions, t >= 0:
///   XX: kappa^2 (cosh phi(t) - 1),   YY: kappa^2 sinh phi(t).
/// Negative arguments follow from C(-t) = conj(C(t)).
cplx corr(double t, Channel ch, const BathParams& b);

/// gamma_aa(omega) = int_-inf^inf e^{i omega tau} C_aa(tau) dtau.
/// Reference evaluation by adaptive quadrature; the slowly decaying
/// one-phonon part of the YY channel is folded in via its closed-form
/// transform so the tau truncation error stays below ~1e-9.
double gamma_rate(double omega, Channel ch, const BathParams& b);

/// Weak-coupling (original frame) spectral rate function:
///   2 pi J(omega)(1 + N(omega)) for omega > 0, 2 pi J(|omega|) N(|omega|)
///   for omega < 0, 0 at omega = 0. Satisfies detailed balance exactly.
double wc_gamma_rate(double omega, const BathParams& b);

/// Lamb-shift integral S_aa(omega) = (1/2pi) p.v. int gamma_aa(w')/(omega-w') dw',
/// via symmetric-window singularity subtraction plus explicit tail quadrature.
/// Builds its correlation workspace internally; intended for spot checks,
/// use build_rate_table for bulk evaluation.
double lamb_s(double omega, Channel ch, const BathParams& b);

/// Precomputed gamma/S tables over a frequency grid with cubic interpolation.
/// Immutable after construction; safe to share across threads.
class RateTable {
   public:
    RateTable(std::vector<double> omega_grid, std::vector<double> gamma_xx,
              std::vector<double> gamma_yy, std::vector<double> s_xx, std::vector<double> s_yy,
              double kappa_value);

    double gxx(double omega) const { return gxx_(omega); }
    double gyy(double omega) const { return gyy_(omega); }
    double sxx(double omega) const { return sxx_(omega); }
    double syy(double omega) const { return syy_(omega); }
    double kappa_value() const { return kappa_; }
    double omega_min() const { return grid_.front(); }
    double omega_max() const { return grid_.back(); }
    const std::vector<double>& grid() const { return grid_; }

    /// CSV columns: omega, gamma_xx, gamma_yy, s_xx, s_yy.
    void write_csv(std::ostream& os) const;
    static RateTable read_csv(std::istream& is, double kappa_value);

   private:
    std::vector<double> grid_;
    std::vector<double> gamma_xx_, gamma_yy_, s_xx_, s_yy_;
    double kappa_;
    CubicSpline<double> gxx_, gyy_, sxx_, syy_;
};

/// Tabulate gamma and S for both polaron channels over [omega_min, omega_max].
/// n_points >= 64; the grid is 4x denser within |omega| <= dense_halfwidth
/// (default 2 kappa, where the rates vary fastest).
RateTable build_rate_table(const BathParams& b, double omega_min, double omega_max, int n_points,
                           double dense_halfwidth = -1.0);

/// Same table layout for the weak-coupling frame: the single sigma_x channel
/// occupies the xx columns, yy columns are zero, kappa is 1.
RateTable build_wc_rate_table(const BathParams& b, double omega_min, double omega_max,
                              int n_points);

}  // namespace polwork::bath
