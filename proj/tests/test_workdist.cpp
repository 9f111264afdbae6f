#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "polwork/workdist.hpp"

using namespace polwork;
using namespace polwork::workdist;

namespace {

evolve::CFGrid synthetic_cf(double eta_max, double d_eta, auto phi_fn) {
    evolve::CFGrid g;
    for (double eta = 0.0; eta <= eta_max + 1e-12; eta += d_eta) {
        g.etas.push_back(eta);
        g.phis.push_back(phi_fn(eta));
    }
    return g;
}

double integrate_density(const DensityGrid& d) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < d.w.size(); ++i)
        acc += 0.5 * (d.p[i] + d.p[i + 1]) * (d.w[i + 1] - d.w[i]);
    return acc;
}

}  // namespace

TEST_CASE("flat CF gives a unit mass at zero work") {
    const auto g = synthetic_cf(50.0, 0.05, [](double) { return cplx{1.0}; });
    const auto d = invert_cf(g, -20.0, 20.0, 8001);
    CHECK(integrate_density(d) == doctest::Approx(1.0).epsilon(1e-3));
    // peak at W = 0
    std::size_t imax = 0;
    for (std::size_t i = 0; i < d.w.size(); ++i)
        if (d.p[i] > d.p[imax]) imax = i;
    CHECK(std::abs(d.w[imax]) < 1e-9);
}

TEST_CASE("shift theorem moves the peak") {
    const double w0 = 3.7;
    const auto g = synthetic_cf(60.0, 0.05,
                                [&](double eta) { return std::exp(cplx{0.0, eta * w0}); });
    const auto d = invert_cf(g, -10.0, 10.0, 4001);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < d.w.size(); ++i)
        if (d.p[i] > d.p[imax]) imax = i;
    CHECK(d.w[imax] == doctest::Approx(w0).epsilon(1e-3));
}

TEST_CASE("Gaussian CF inverts to the Gaussian density") {
    const double sigma = 1.0;
    const auto g = synthetic_cf(10.0, 0.01, [&](double eta) {
        return cplx{std::exp(-0.5 * eta * eta * sigma * sigma)};
    });
    const auto d = invert_cf(g, -6.0, 6.0, 2401);
    for (std::size_t i = 0; i < d.w.size(); i += 40) {
        const double exact = std::exp(-0.5 * d.w[i] * d.w[i] / (sigma * sigma)) /
                             (sigma * std::sqrt(2.0 * std::numbers::pi));
        CHECK(std::abs(d.p[i] - exact) < 1e-4);
    }
}

TEST_CASE("scalar and SIMD kernels agree") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 2000, nw = 37;
    std::vector<double> re(n), im(n), w(nw), a(nw), b(nw);
    for (auto& v : re) v = u(rng);
    for (auto& v : im) v = u(rng);
    for (std::size_t j = 0; j < nw; ++j) w[j] = -15.0 + u(rng) * 30.0;
    kernels::cf_sum_scalar(re.data(), im.data(), n, 0.05, w.data(), nw, a.data());
    kernels::cf_sum_auto(re.data(), im.data(), n, 0.05, w.data(), nw, b.data());
    for (std::size_t j = 0; j < nw; ++j)
        CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-10));
}

TEST_CASE("aliasing guard") {
    const auto g = synthetic_cf(10.0, 0.05, [](double) { return cplx{1.0}; });
    CHECK_THROWS_AS((void)invert_cf(g, -100.0, 100.0, 100), std::invalid_argument);
}

TEST_CASE("binning a uniform density") {
    DensityGrid d;
    for (int i = 0; i <= 1000; ++i) {
        d.w.push_back(i * 0.01);
        d.p.push_back(0.1);  // uniform over [0, 10]
    }
    const auto dist = bin_distribution(d, 0.5);
    REQUIRE(dist.centers.size() == 20);
    for (const double p : dist.probabilities) CHECK(p == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(dist.normalization_deficit < 1e-12);
    CHECK(dist.negativity == 0.0);
}

TEST_CASE("negativity bookkeeping") {
    DensityGrid d;
    for (int i = 0; i <= 100; ++i) {
        d.w.push_back(i * 0.1);
        d.p.push_back(i < 50 ? 0.11 : -0.01);
    }
    const auto dist = bin_distribution(d, 1.0);
    CHECK(dist.negativity > 0.0);
}

TEST_CASE("moments from closed-form CFs") {
    const double mu = 2.0, sigma = 0.8;
    const auto g = synthetic_cf(0.05, 0.01, [&](double eta) {
        return std::exp(cplx{-0.5 * eta * eta * sigma * sigma, eta * mu});
    });
    const auto m = moments_from_cf(g);
    CHECK(m.mean == doctest::Approx(mu).epsilon(1e-6));
    CHECK(m.variance == doctest::Approx(sigma * sigma).epsilon(1e-5));

    // pure shift: mean w0, variance 0
    const auto gs = synthetic_cf(0.05, 0.01,
                                 [](double eta) { return std::exp(cplx{0.0, eta * 1.3}); });
    const auto ms = moments_from_cf(gs);
    CHECK(ms.mean == doctest::Approx(1.3).epsilon(1e-7));
    CHECK(std::abs(ms.variance) < 1e-6);
}

TEST_CASE("moments preconditions") {
    const auto coarse = synthetic_cf(1.0, 0.1, [](double) { return cplx{1.0}; });
    CHECK_THROWS_AS((void)moments_from_cf(coarse), std::invalid_argument);
}

TEST_CASE("moments from a synthetic distribution") {
    WorkDistribution dist;
    dist.bin_width = 1.0;
    dist.centers = {-1.0, 0.0, 1.0};
    dist.probabilities = {0.25, 0.5, 0.25};
    const auto m = moments_from_distribution(dist);
    CHECK(m.mean == doctest::Approx(0.0));
    CHECK(m.variance == doctest::Approx(0.5));
}

TEST_CASE("jarzynski check, symmetric and static protocols") {
    const bath::BathParams strong{0.4, 10.0, 1.0, true};
    const system::DriveProtocol lz{0.1, -100.0, 100.0, 1.0};
    const auto ctx = generator::GeneratorContext::make(system::Frame::Polaron, lz, strong);
    const evolve::SolverOptions opts;
    const auto r = workdist::jarzynski_check(ctx, opts);
    CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-12));  // dF = 0 by symmetry
    CHECK(r.deviation < 1e-3);

    const system::DriveProtocol still{0.0, -10.0, 10.0, 1.0};
    const auto ctx0 = generator::GeneratorContext::make(system::Frame::Polaron, still, strong);
    const auto r0 = workdist::jarzynski_check(ctx0, opts);
    CHECK(r0.lhs == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r0.rhs == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jarzynski check, asymmetric protocol") {
    const bath::BathParams strong{0.4, 10.0, 1.0, true};
    const system::DriveProtocol asym{0.1, -100.0, 50.0, 1.0};
    const auto ctx = generator::GeneratorContext::make(system::Frame::Polaron, asym, strong);
    const evolve::SolverOptions opts;
    const auto r = workdist::jarzynski_check(ctx, opts);
    const double df = system::free_energy_ps(50.0, asym, ctx.kappa, 1.0) -
                      system::free_energy_ps(-100.0, asym, ctx.kappa, 1.0);
    CHECK(r.rhs == doctest::Approx(std::exp(-df)).epsilon(1e-12));
    CHECK(r.deviation < 1e-3);
}

TEST_CASE("distribution CSV output") {
    WorkDistribution dist;
    dist.bin_width = 0.5;
    dist.centers = {0.25, 0.75};
    dist.probabilities = {0.5, 0.5};
    std::stringstream ss;
    dist.write_csv(ss);
    CHECK(ss.str().find("w_center,probability") == 0);
}
