#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "polwork/dynamics_bench.hpp"
#include "polwork/generator.hpp"

using namespace polwork;
using namespace polwork::dynamics_bench;

namespace {

std::vector<double> grid(double t0, double t1, double dt) {
    std::vector<double> g;
    for (double t = t0; t <= t1 + 1e-9; t += dt) g.push_back(std::min(t, t1));
    return g;
}

const Mat2C excited{{cplx{1.0}, cplx{0.0}, cplx{0.0}, cplx{0.0}}};  // |1><1|

}  // namespace

TEST_CASE("vanishing coupling collapses all three sources") {
    const system::DriveProtocol lz{0.1, -30.0, 30.0, 1.0};
    const bath::BathParams feeble{1e-6, 10.0, 1.0, true};
    const evolve::SolverOptions opts;
    const auto cmp = run_comparison(lz, feeble, excited,
                                    {Source::PME, Source::WCME, Source::Closed},
                                    grid(-30.0, 30.0, 2.0), opts);
    REQUIRE(cmp.trajectories.size() == 3);
    for (const auto& d : cmp.deviations) CHECK(d.max_abs < 1e-3);
}

TEST_CASE("static protocol from the fixed point is flat") {
    const system::DriveProtocol still{0.0, -20.0, 20.0, 1.0};
    const bath::BathParams strong{0.4, 10.0, 1.0, true};
    const auto ctx = generator::GeneratorContext::make(system::Frame::Polaron, still, strong);
    const Mat2C pi_eq = generator::equilibrium_state(still.t_i, ctx);
    const evolve::SolverOptions opts;
    const auto cmp =
        run_comparison(still, strong, pi_eq, {Source::PME}, grid(-20.0, 20.0, 5.0), opts);
    const auto& z = cmp.trajectories[0].sigma_z;
    for (const double v : z) CHECK(v == doctest::Approx(z.front()).epsilon(1e-6));
}

TEST_CASE("trajectory bounds hold on the strong-coupling sweep") {
    const system::DriveProtocol lz{0.1, -40.0, 40.0, 1.0};
    const bath::BathParams strong{0.4, 10.0, 1.0, true};
    const evolve::SolverOptions opts;
    const auto cmp = run_comparison(lz, strong, excited, {Source::PME, Source::WCME},
                                    grid(-40.0, 40.0, 4.0), opts);
    for (const auto& tr : cmp.trajectories) {
        tr.validate();
        for (const double z : tr.sigma_z) CHECK(std::abs(z) <= 1.0 + 1e-8);
    }
    REQUIRE(cmp.deviations.size() == 1);
    CHECK(cmp.deviations[0].max_abs > 0.0);
}

TEST_CASE("external reference import round trip") {
    const auto g = grid(0.0, 10.0, 1.0);
    std::stringstream ss;
    ss << "t,sigma_z\n";
    for (const double t : g) ss << t << "," << 0.1 * t << "\n";
    const auto tr = import_reference(ss, g);
    REQUIRE(tr.times.size() == g.size());
    CHECK(tr.sigma_z[5] == doctest::Approx(0.5).epsilon(1e-12));
    // resampling onto a shifted grid interpolates linearly
    std::stringstream ss2;
    for (const double t : g) ss2 << t << "," << 0.1 * t << "\n";
    const auto tr2 = import_reference(ss2, {0.5, 1.5, 9.5});
    CHECK(tr2.sigma_z[0] == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("malformed references are rejected") {
    std::stringstream decreasing("0.0,0.1\n-1.0,0.2\n");
    CHECK_THROWS_AS((void)import_reference(decreasing, {0.0}), std::invalid_argument);
    std::stringstream garbage("0.0,0.1\nnot,a,row\n");
    CHECK_THROWS_AS((void)import_reference(garbage, {0.0}), std::invalid_argument);
    std::stringstream short_file("0.0,0.1\n");
    CHECK_THROWS_AS((void)import_reference(short_file, {0.0}), std::invalid_argument);
}

TEST_CASE("zero deviation against an identical trajectory") {
    const system::DriveProtocol lz{0.1, -10.0, 10.0, 1.0};
    const bath::BathParams strong{0.4, 10.0, 1.0, true};
    const evolve::SolverOptions opts;
    auto cmp =
        run_comparison(lz, strong, excited, {Source::PME}, grid(-10.0, 10.0, 2.0), opts);
    std::stringstream ss;
    const auto& pme = cmp.trajectories[0];
    for (std::size_t i = 0; i < pme.times.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", pme.times[i], pme.sigma_z[i]);
        ss << buf;
    }
    add_trajectory(cmp, import_reference(ss, pme.times));
    CHECK(cmp.deviations.back().max_abs < 1e-14);
}

TEST_CASE("comparison JSON report") {
    Comparison cmp;
    Trajectory t;
    t.label = "PME";
    t.times = {0.0, 1.0};
    t.sigma_z = {1.0, 0.5};
    add_trajectory(cmp, t);
    std::stringstream ss;
    cmp.write_json(ss);
    CHECK(ss.str().find("\"PME\"") != std::string::npos);
}
