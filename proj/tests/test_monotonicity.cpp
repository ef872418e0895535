#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aclab/diagnostics.hpp"
#include "aclab/interfaces.hpp"
#include "aclab/monotonicity.hpp"
#include "aclab/solver.hpp"
#include "support.hpp"

using namespace aclab;
using aclab::testing::Gen;

namespace {

constexpr double pi = std::numbers::pi;
const double alpha = DoubleWell::alpha;

Trajectory still_wave(int n, double L, double eps, double T, int frames) {
    Grid g(2, n, L);
    auto u = prepare_interface(g, eps, slab_distance(g));
    int per = std::max(4, static_cast<int>(std::ceil(T / frames / (0.1 * eps * eps))));
    return evolve(u, {T / (frames * per), Scheme::semi_implicit, T, per});
}

}  // namespace

TEST_CASE("heat kernel values") {
    KernelPoint kp{Vec{0.1, -0.2, 0}, 1.0, 1};
    CHECK(huisken_kernel(kp, kp.y, 0.0) == doctest::Approx(1.0 / std::sqrt(4 * pi)));
    CHECK(huisken_kernel(kp, kp.y, 0.0) == doctest::Approx(0.28209).epsilon(1e-5));
    CHECK_THROWS(huisken_kernel(kp, kp.y, 1.0));
    CHECK_THROWS(huisken_kernel(kp, kp.y, 2.0));

    // a line through y carries unit mass
    double tau = 0.3;
    double mass = aclab::testing::simpson(
        [&](double x) { return huisken_kernel({Vec{}, tau, 1}, Vec{x, 0, 0}, 0.0); }, -20.0, 20.0, 40000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("property: heat kernel symmetry and parabolic scaling") {
    Gen gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        int n = gen.integer(0, 2);
        KernelPoint kp{Vec{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)}, gen.uniform(-1, 1), n};
        Vec v{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)};
        double t = kp.s - gen.uniform(0.05, 2.0);
        Vec a{kp.y[0] + v[0], kp.y[1] + v[1], kp.y[2] + v[2]};
        Vec b{kp.y[0] - v[0], kp.y[1] - v[1], kp.y[2] - v[2]};
        CHECK(huisken_kernel(kp, a, t) == doctest::Approx(huisken_kernel(kp, b, t)).epsilon(1e-14));

        double lam = gen.uniform(0.2, 3.0);
        KernelPoint origin{Vec{}, 0.0, n};
        Vec x{v[0] * lam, v[1] * lam, v[2] * lam};
        CHECK(huisken_kernel(origin, x, -lam * lam) ==
              doctest::Approx(std::pow(lam, -n) * huisken_kernel(origin, v, -1.0)).epsilon(1e-12));
    }
}

TEST_CASE("gaussian density of a plane") {
    Grid g(2, 1024, 1.0);
    double tau = 0.002, eps = 0.05 * std::sqrt(tau);
    auto one = TestFunction::constant_one();
    KernelPoint kp{Vec{}, tau, 1};

    auto u = prepare_interface(g, eps, slab_distance(g));
    auto d0 = gaussian_density(u, kp, one);
    CHECK(d0.support_ok);
    CHECK(d0.value == doctest::Approx(alpha).epsilon(0.02));

    double d = std::sqrt(tau);
    auto shifted = prepare_interface(g, eps, slab_distance(g, d));
    CHECK(gaussian_density(shifted, kp, one).value == doctest::Approx(alpha * std::exp(-d * d / (4 * tau))).epsilon(0.02));

    CHECK(gaussian_density(ScalarField::filled(g, 1.0, eps), kp, one).value == 0.0);

    // a wide kernel reaches the box boundary
    CHECK_FALSE(gaussian_density(u, {Vec{}, 0.1, 1}, one).support_ok);
    // unless rho cuts it off inside the box
    CHECK(gaussian_density(u, {Vec{}, 0.1, 1}, TestFunction::radial_bump(Vec{}, 0.3)).support_ok);

    CHECK_THROWS(gaussian_density(u, {Vec{}, 0.0, 1}, one));
    CHECK_THROWS(gaussian_density(u, {Vec{}, 0.1, 2}, one));
}

TEST_CASE("monotonicity residual of the standing wave") {
    auto tr = still_wave(256, 2.0, 0.04, 0.004, 8);
    KernelPoint kp{Vec{}, 0.01, 1};
    double t = 0.002;
    auto m = monotonicity_residual(tr, kp, t, TestFunction::constant_one());
    CHECK(m.support_ok);
    CHECK(m.time == doctest::Approx(t));
    // the wave is static; only the kernel moves, and at finite eps the square term
    // carries grad u.(x - y) / 2(s - t)
    CHECK(std::abs(m.discrepancy_term) <= 1e-6);
    CHECK(m.rho_time_term == 0.0);
    CHECK(m.hessian_term == 0.0);
    CHECK(m.dissipative_term < 0.0);
    CHECK(m.rate < 0.0);
    CHECK(m.residual <= 1e-2 * std::abs(m.rate));

    CHECK_THROWS(monotonicity_residual(tr, kp, 0.0, TestFunction::constant_one()));
    CHECK_THROWS(monotonicity_residual(tr, kp, tr.back().time(), TestFunction::constant_one()));
    CHECK_THROWS(monotonicity_residual(tr, {Vec{}, 0.002, 1}, t, TestFunction::constant_one()));
}

TEST_CASE("monotonicity residual is second order in the sampling interval") {
    KernelPoint kp{Vec{}, 0.01, 1};
    std::vector<double> res;
    for (int frames : {4, 8, 16}) {
        auto tr = still_wave(256, 2.0, 0.04, 0.004, frames);
        res.push_back(monotonicity_residual(tr, kp, 0.002, TestFunction::constant_one()).residual);
    }
    CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.2));
    CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("property: gaussian density is non-increasing for well-prepared circles") {
    Gen gen(17);
    for (int trial = 0; trial < 4; ++trial) {
        Grid g(2, 128, 1.0);
        double eps = gen.uniform(4.5, 6.0) * g.spacing();
        double R = gen.uniform(0.2, 0.3);
        auto u = prepare_interface(g, eps, sphere_distance(Vec{}, R));
        double dt = 0.025 * eps * eps;
        auto tr = evolve(u, {dt, Scheme::semi_implicit, 400 * dt, 40});
        double s = tr.back().time() + gen.uniform(0.005, 0.01);
        KernelPoint kp{Vec{gen.uniform(-R, R), gen.uniform(-R, R), 0}, s, 1};
        double T = tr.back().time() - tr.front().time();
        double prev = gaussian_density(tr.front(), kp, TestFunction::constant_one()).value;
        for (std::size_t k = 1; k < tr.size(); ++k) {
            double d = gaussian_density(tr.frame(k), kp, TestFunction::constant_one()).value;
            CHECK(d <= prev * (1 + 1e-3 * T));
            prev = d;
        }
    }
}

TEST_CASE("L2-Linfty ratio") {
    Grid g(2, 64, 1.0);
    auto flat1 = evolve(ScalarField::filled(g, 1.0, 0.05), {0.0002, Scheme::semi_implicit, 0.04, 20});
    ParabolicCylinder cyl{Vec{}, 0.04, 0.2};
    CHECK(l2_linfty_ratio(flat1, cyl) == 0.0);

    std::vector<double> ratios;
    for (double eps : {0.05, 0.025}) {
        auto tr = still_wave(256, 1.0, eps, 0.04, 10);
        double r = l2_linfty_ratio(tr, cyl);
        CHECK(std::isfinite(r));
        CHECK(r > 0.0);
        ratios.push_back(r);
    }
    CHECK(std::max(ratios[0], ratios[1]) / std::min(ratios[0], ratios[1]) <= 2.0);
}
