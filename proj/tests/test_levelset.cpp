#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "aclab/interfaces.hpp"
#include "aclab/levelset.hpp"
#include "aclab/solver.hpp"
#include "support.hpp"

using namespace aclab;
using aclab::testing::Gen;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField wave(int n, double L, double eps) {
    Grid g(2, n, L);
    return prepare_interface(g, eps, slab_distance(g));
}

// The same field at several times.
Trajectory frozen(const ScalarField& u, int frames, double dt) {
    std::vector<ScalarField> f;
    for (int k = 0; k < frames; ++k) f.push_back(u.at_time(k * dt));
    return Trajectory(std::move(f), dt);
}

BaseFunction constant_base(int n, double L, int frames, double dt, double c) {
    BaseFunction f{Grid(1, n, L), {}, {}};
    for (int k = 0; k < frames; ++k) {
        f.times.push_back(k * dt);
        f.values.emplace_back(n, c);
    }
    return f;
}

}  // namespace

TEST_CASE("distance function") {
    double eps = 0.05;
    auto u = wave(256, 2.0, eps);
    auto z = distance_function(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double y = u.grid().position(i)[1];
        if (std::abs(y) < 0.5 && std::abs(u[i]) <= 0.999) worst = std::max(worst, std::abs(z[i] - y));
    }
    CHECK(worst <= 1e-8);
    CHECK(distance_function(ScalarField::filled(u.grid(), 0.0, eps)).max_abs() == 0.0);
    CHECK(std::isfinite(distance_function(ScalarField::filled(u.grid(), 1.0, eps)).max_abs()));
    CHECK(max_distance_gradient(u) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("property: distance gradient stays below one for well-prepared circles") {
    Gen gen(41);
    for (int trial = 0; trial < 5; ++trial) {
        Grid g(2, 128, 1.0);
        double eps = gen.uniform(4.5, 6.0) * g.spacing();
        Vec c{gen.uniform(-0.02, 0.02), gen.uniform(-0.02, 0.02), 0};
        auto u = prepare_interface(g, eps, sphere_distance(c, gen.uniform(0.2, 0.25)));
        double dt = 0.025 * eps * eps;
        auto tr = evolve(u, {dt, Scheme::semi_implicit, 100 * dt, 20});
        // the prepared data carries the kinks of the cone tip and the box edge; the
        // first steps smooth them out
        for (std::size_t k = 1; k < tr.size(); ++k) CHECK(max_distance_gradient(tr.frame(k)) <= 1.0 + 1e-3);
    }
}

TEST_CASE("graph of the standing wave") {
    double eps = 0.1;
    auto u = wave(256, 4.0, eps);
    auto g = extract_graph(u, 0.5);
    CHECK(g.base_dim == 1);
    CHECK(g.validity_fraction() == 1.0);
    CHECK(g.window == doctest::Approx(1.0));
    for (double h : g.heights[0]) CHECK(std::abs(h - 0.1 * std::atanh(0.5)) <= 1e-9);
    auto zero = extract_graph(u, 0.0);
    for (double h : zero.heights[0]) CHECK(std::abs(h) <= 1e-12);

    // the periodic mirror is a second crossing outside the window
    auto cross = column_crossings(u, 3, 0.0);
    CHECK(cross.size() == 2);

    CHECK_THROWS(extract_graph(ScalarField::filled(u.grid(), 1.0, eps), 0.0));
    // a window past L/4 sees the mirror in every column
    CHECK_THROWS(extract_graph(u, 0.0, 2.0));
}

TEST_CASE("graph of a tilted plane is affine") {
    Grid g(2, 256, 1.0);
    double eps = 0.02, m = 0.05, w = 0.05, s = 0.3;
    auto prof = tilted_profile(m, 1.0, w);
    auto u = prepare_interface(g, eps, graph_distance(g, prof));
    auto graph = extract_graph(u, s);
    double lift = eps * std::atanh(s) * std::sqrt(1 + m * m);
    int checked = 0;
    for (std::size_t b = 0; b < graph.base_size(); ++b) {
        double x = graph.base_position(b)[0];
        if (std::abs(x) > 0.25 - w - 3 * eps) continue;
        CHECK(graph.valid[0][b]);
        CHECK(graph.heights[0][b] == doctest::Approx(prof.f(x) + lift).epsilon(1e-6));
        ++checked;
    }
    CHECK(checked > 50);
    CHECK(graph_derivative_relations(u, s).horizontal <= 1e-5);
}

TEST_CASE("derivative relations") {
    auto u = wave(128, 2.0, 0.1);
    auto d = graph_derivative_relations(u, 0.2);
    CHECK(d.points_checked == 128);
    CHECK(d.max() <= 1e-5);
    CHECK(d.temporal == 0.0);

    // a cosine graph under the flow: the time relation is limited by the scheme's
    // first-order error, so it halves with the time step
    Grid g(2, 128, 1.0);
    double eps = 0.04, dt = 0.01 * eps * eps;
    auto c0 = prepare_interface(g, eps, graph_distance(g, cosine_profile(0.05, 1.0)));
    auto c = evolve(c0, {dt, Scheme::semi_implicit, 400 * dt, 400}).back();
    std::vector<double> temporal;
    for (int f : {1, 2, 4}) {
        auto tr = evolve(c, {dt / f, Scheme::semi_implicit, 160 * dt, 10 * f});
        auto rel = graph_derivative_relations(tr, 0.0);
        CHECK(rel.points_checked == 128 * tr.size());
        CHECK(rel.horizontal <= 1e-5);
        temporal.push_back(rel.temporal);
    }
    CHECK(temporal[0] / temporal[1] == doctest::Approx(2.0).epsilon(0.1));
    CHECK(temporal[1] / temporal[2] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("graph CSV") {
    auto u = wave(32, 2.0, 0.2);
    auto g = extract_graph(frozen(u, 2, 0.1), 0.0);
    auto csv = graph_csv(g);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x1,h,valid");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 64);
}

TEST_CASE("parabolic maximal function") {
    auto radii = dyadic_radii(0.5, 0.01);
    CHECK(radii.size() == 5);
    CHECK(radii.back() == doctest::Approx(0.03125));
    CHECK_THROWS(dyadic_radii(0.01, 0.01));

    // constant c, n = 1: r^{-3} 2r 2r^2 c = 4c, up to the lattice ball
    double c = 0.7;
    auto f = constant_base(1024, 2.0, 101, 0.01, c);
    std::vector<double> big{0.5};
    CHECK(parabolic_maximal(f, 100, 50, big) == doctest::Approx(4 * c).epsilon(0.01));
    auto zero = constant_base(64, 2.0, 11, 0.01, 0.0);
    std::vector<double> r1{0.1};
    CHECK(parabolic_maximal(zero, 3, 5, r1) == 0.0);
    // a radius whose window leaves the data contributes nothing
    std::vector<double> r2{0.9};
    CHECK(parabolic_maximal(zero, 3, 5, r2) == 0.0);
    std::vector<double> bad{1.5};
    CHECK_THROWS(parabolic_maximal(zero, 3, 5, bad));
}

TEST_CASE("parabolic maximal function of a spike") {
    int n = 256;
    double L = 2.0;
    auto f = constant_base(n, L, 201, 0.005, 0.0);
    double h = L / n;
    std::size_t p = 128;
    for (auto& row : f.values) row[p] = 1.0 / h;
    auto radii = dyadic_radii(0.25, h);
    double at = parabolic_maximal(f, p, 100, radii);
    // int over P_r = 2 r^2, so r^{-3} 2r^2 peaks at the smallest radius
    CHECK(at == doctest::Approx(2.0 / radii.back()).epsilon(1e-9));
    double prev = at;
    for (std::size_t q : {p + 3, p + 6, p + 12, p + 24}) {
        double v = parabolic_maximal(f, q, 100, radii);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("property: the maximal function dominates every radius") {
    Gen gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 * gen.integer(8, 32);
        BaseFunction f{Grid(1, n, gen.uniform(1.0, 2.0)), {}, {}};
        int frames = gen.integer(5, 40);
        double dt = gen.uniform(0.001, 0.01);
        for (int k = 0; k < frames; ++k) {
            f.times.push_back(k * dt);
            std::vector<double> v(n);
            for (auto& x : v) x = gen.uniform(0.0, 1.0);
            f.values.push_back(std::move(v));
        }
        auto radii = dyadic_radii(0.5 * f.base.extent(), f.base.spacing());
        std::size_t point = gen.integer(0, n - 1), frame = gen.integer(0, frames - 1);
        double sup = parabolic_maximal(f, point, frame, radii);
        double best = 0.0;
        for (double r : radii) {
            std::vector<double> one{r};
            double v = parabolic_maximal(f, point, frame, one);
            CHECK(sup >= v);
            best = std::max(best, v);
        }
        CHECK(sup == best);
    }
}

TEST_CASE("good and bad sets") {
    auto u = wave(64, 1.0, 0.05);
    auto tr = frozen(u, 11, 0.002);
    ParabolicCylinder cyl{Vec{}, 0.01, 0.1};
    for (double l : {1e-6, 1e-3, 1.0}) {
        auto p = partition_good_bad(tr, l, 0.1, cyl);
        CHECK(p.count(CellState::bad) == 0);
        CHECK(p.count(CellState::good) > 0);
    }
    CHECK_THROWS(partition_good_bad(tr, 0.0, 0.1, cyl));
    CHECK_THROWS(partition_good_bad(tr, 1.0, 1.0, cyl));

    // a wavy interface: the bad set shrinks as l grows and vanishes for huge l
    Grid g(2, 96, 1.0);
    double eps = 0.03;
    auto w = prepare_interface(g, eps, graph_distance(g, cosine_profile(0.06, 1.0)));
    auto tw = frozen(w, 21, 0.005);
    ParabolicCylinder c2{Vec{-0.25, 0, 0}, 0.05, 0.1};
    auto p = partition_good_bad(tw, 0.01, 0.1, c2);
    std::size_t prev = p.count(CellState::bad);
    CHECK(prev > 0);
    for (double l : {0.02, 0.04, 0.08, 1e6}) {
        auto q = rethreshold(p, l);
        CHECK(q.count(CellState::bad) <= prev);
        CHECK(q.count(CellState::bad) + q.count(CellState::good) == p.count(CellState::bad) + p.count(CellState::good));
        prev = q.count(CellState::bad);
    }
    CHECK(prev == 0);
    CHECK(weak_l1_ratio(tw, rethreshold(p, 1e6)) == 0.0);
    CHECK(std::isfinite(weak_l1_ratio(tw, p)));
    CHECK(weak_l1_ratio(tw, p) > 0.0);
}

TEST_CASE("heat comparison with exact mode decay") {
    int n = 64;
    double L = 1.0, a = 0.01, k = 2 * pi / L;
    LevelSetGraph g;
    g.level = 0.0;
    g.base_dim = 1;
    g.points = n;
    g.extent = L;
    g.window = 0.25;
    std::vector<double> h0(n);
    for (int b = 0; b < n; ++b) h0[b] = a * std::cos(k * (-0.5 * L + b * L / n));
    for (int f = 0; f < 6; ++f) {
        double t = 0.002 * f;
        g.times.push_back(t);
        std::vector<double> h(n);
        for (int b = 0; b < n; ++b) h[b] = 0.3 + h0[b] * std::exp(-k * k * t);
        g.heights.push_back(h);
        g.valid.emplace_back(n, 1);
    }
    auto hc = heat_compare(g, h0, 0.0);
    CHECK(hc.relative_l2 <= 1e-12);
    CHECK(hc.frame_errors.size() == 6);
    CHECK(heat_compare(g, h0, 0.0, 0.006).frame_times.size() == 1);

    // a wrong decay rate shows up
    auto slow = g;
    for (int f = 0; f < 6; ++f)
        for (int b = 0; b < n; ++b) slow.heights[f][b] = h0[b] * std::exp(-0.5 * k * k * g.times[f]);
    CHECK(heat_compare(slow, h0, 0.0).relative_l2 > 1e-3);

    auto flat = g;
    std::vector<double> zero(n, 0.0);
    for (auto& h : flat.heights) std::fill(h.begin(), h.end(), 0.1);
    CHECK(heat_compare(flat, zero, 0.0).relative_l2 <= 1e-12);

    auto holes = g;
    for (auto& v : holes.valid) std::fill(v.begin(), v.begin() + 8, 0);
    CHECK_THROWS(heat_compare(holes, h0, 0.0));
    std::vector<double> shortv(n - 1, 0.0);
    CHECK_THROWS(heat_compare(g, shortv, 0.0));
}

TEST_CASE("excess decay on exact planes") {
    double eps = 0.02, theta = 0.25;
    auto u = wave(128, 1.0, eps);
    ParabolicCylinder cyl{Vec{}, 0.03, 0.15};
    auto flat = excess_decay_ratio(frozen(u, 13, 0.005), theta, cyl);
    CHECK(flat.tilt_distance <= 1e-8);
    CHECK(flat.theta == theta);
    // both excesses are the layer width alone, H ~ (eps / r)^2, so the ratio is theta^{-2}
    CHECK(flat.ratio == doctest::Approx(1.0 / (theta * theta)).epsilon(0.3));
    CHECK_FALSE(flat.k1_condition);
    CHECK_FALSE(flat.decays);

    // tilted: the weighted fit recovers the normal once eps << theta R
    Grid g(2, 512, 1.0);
    double m = 0.05;
    auto prof = tilted_profile(m, 1.0, 0.05);
    auto t = prepare_interface(g, 0.01, graph_distance(g, prof));
    ParabolicCylinder c2{Vec{0, prof.f(0.0), 0}, 0.04, 0.2};
    auto r = excess_decay_ratio(frozen(t, 17, 0.005), 0.5, c2);
    Vec truth = normalized(Vec{-m, 1, 0});
    Vec diff{r.plane.normal[0] - truth[0], r.plane.normal[1] - truth[1], 0};
    CHECK(norm(diff) <= 1e-3);
    CHECK(r.tilt_distance == doctest::Approx(norm(Vec{truth[0], truth[1] - 1, 0})).epsilon(2e-2));
}
