// workdist.hpp — characteristic function -> work distribution: Fourier
// inversion, binning, moments, Jarzynski equality.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "polwork/evolve.hpp"
#include "polwork/generator.hpp"

namespace polwork::workdist {

enum class Window { Rectangular, Hann };

/// Work density samples p(W) on a uniform W grid (pre-binning).
struct DensityGrid {
    std::vector<double> w;
    std::vector<double> p;

    double peak() const;          // max p
    double most_negative() const; // min(p), <= 0 means Fourier ringing

    /// Two-column plot data (w, p), gnuplot friendly.
    void write_dat(std::ostream& os) const;
};

namespace kernels {

/// out[j] = sum_k (re[k] cos(k d w[j]) + im[k] sin(k d w[j])), all weights
/// folded into re/im by the caller.
void cf_sum_scalar(const double* re, const double* im, std::size_t n, double d,
                   const double* w, std::size_t nw, double* out);
void cf_sum_auto(const double* re, const double* im, std::size_t n, double d, const double* w,
                 std::size_t nw, double* out);
bool avx2_active();

}  // namespace kernels

/// p(W) = (1/pi) Re sum'_k e^{-i eta_k W} Phi(eta_k) d_eta (trapezoid weights,
/// half weight at the first and last sample), using Phi(-eta) = conj(Phi(eta)).
/// W range hard-capped at 0.9 pi / d_eta against aliasing.
DensityGrid invert_cf(const evolve::CFGrid& grid, double w_min, double w_max,
                      std::size_t n_points, Window window = Window::Rectangular);

struct WorkDistribution {
    std::vector<double> centers;
    std::vector<double> probabilities;
    double bin_width{0.0};
    double normalization_deficit{0.0};  // |1 - sum P|
    double negativity{0.0};             // sum |min(P, 0)|

    /// CSV columns: w_center, probability.
    void write_csv(std::ostream& os) const;
};

/// Integrate the piecewise-linear density over consecutive bins of width
/// delta_w covering the density support.
WorkDistribution bin_distribution(const DensityGrid& density, double delta_w);

struct Moments {
    double mean{0.0};
    double variance{0.0};
};

/// <W> = Im Phi'(0), <W^2> = -Re Phi''(0) by 5-point central differences on
/// the grid spacing; requires spacing <= 0.01.
Moments moments_from_cf(const evolve::CFGrid& grid);
Moments moments_from_distribution(const WorkDistribution& dist);

struct JarzynskiResult {
    double lhs;        // Re trace K(t_f, i beta); imaginary part reported separately
    double lhs_imag;
    double rhs;        // e^{-beta dF} from the frame free energy
    double deviation;  // |lhs - rhs|
};

JarzynskiResult jarzynski_check(const generator::GeneratorContext& ctx,
                                const evolve::SolverOptions& opts);

}  // namespace polwork::workdist
