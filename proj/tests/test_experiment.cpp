#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "aclab/experiment.hpp"
#include "aclab/interfaces.hpp"
#include "aclab/levelset.hpp"
#include "support.hpp"

using namespace aclab;
namespace fs = std::filesystem;

namespace {

bool mentions(const ConfigError& e, const std::string& what) {
    return std::any_of(e.violations().begin(), e.violations().end(),
                       [&](const std::string& v) { return v.find(what) != std::string::npos; });
}

ExperimentConfig small_wave() {
    auto c = ExperimentConfig::defaults(Scenario::standing_wave);
    c.points = {1024};
    c.epsilon = {0.05};
    c.t_end = 0.05;
    c.frames = 5;
    return c;
}

}  // namespace

TEST_CASE("scenario names") {
    for (const auto& n : scenario_names()) CHECK(to_string(parse_scenario(n)) == n);
    CHECK(scenario_names().size() == 6);
    CHECK_THROWS_AS(parse_scenario("bogus"), std::invalid_argument);
}

TEST_CASE("defaults are valid and survive a JSON round trip") {
    for (const auto& n : scenario_names()) {
        auto c = ExperimentConfig::defaults(parse_scenario(n));
        CHECK_NOTHROW(c.validate());
        auto back = ExperimentConfig::from_json(c.to_json());
        CHECK(back.to_json() == c.to_json());
    }
}

TEST_CASE("missing keys take the scenario defaults") {
    auto c = ExperimentConfig::from_json(R"({"scenario": "shrinking-circle", "seed": 7, "epsilon": 0.03})");
    auto d = ExperimentConfig::defaults(Scenario::shrinking_circle);
    CHECK(c.seed == 7);
    CHECK(c.epsilon == std::vector<double>{0.03});
    CHECK(c.points == d.points);
    CHECK(c.radius == d.radius);
}

TEST_CASE("config parsing errors") {
    auto fails_with = [](const std::string& text, const std::string& what) {
        try {
            ExperimentConfig::from_json(text);
        } catch (const ConfigError& e) {
            return mentions(e, what);
        }
        return false;
    };
    CHECK(fails_with("{", "not valid JSON"));
    CHECK(fails_with("[1, 2]", "JSON object"));
    CHECK(fails_with("{}", "scenario"));
    CHECK(fails_with(R"({"scenario": "nope"})", "unknown scenario"));
    CHECK(fails_with(R"({"scenario": "standing-wave", "tend": 1.0})", "unknown key 'tend'"));
    CHECK(fails_with(R"({"scenario": "standing-wave", "frames": 2.5})", "'frames' must be an integer"));
    CHECK(fails_with(R"({"scenario": "standing-wave", "points": [64, "x"]})", "'points'"));
    CHECK(fails_with(R"({"scenario": "standing-wave", "scheme": "euler"})", "euler"));
    CHECK(fails_with(R"({"scenario": "standing-wave", "seed": -1})", "'seed'"));

    // every bad key is reported, not only the first
    try {
        ExperimentConfig::from_json(R"({"scenario": "standing-wave", "a": 1, "b": 2})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.violations().size() == 2);
    }
}

TEST_CASE("validation names the violated rule") {
    auto c = ExperimentConfig::defaults(Scenario::shrinking_circle);
    c.points = {64};
    c.epsilon = {0.01};
    auto v = c.violations();
    CHECK(std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.find("resolution rule") != std::string::npos; }));

    c = ExperimentConfig::defaults(Scenario::shrinking_circle);
    c.radius = 0.65;
    v = c.violations();
    CHECK(std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.find("margin rule") != std::string::npos; }));

    c = ExperimentConfig::defaults(Scenario::shrinking_circle);
    c.t_end = 0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    c = ExperimentConfig::defaults(Scenario::excess_decay);
    c.theta = 1.5;
    c.band = 0.0;
    c.thresholds = {};
    v = c.violations();
    CHECK(v.size() >= 3);

    c = ExperimentConfig::defaults(Scenario::standing_wave);
    c.dt_factor = 0.75;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ExperimentConfig::defaults(Scenario::no_cancellation);
    c.dim = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("checks") {
    CHECK(make_check("a", "c", 1.0, "<=", 1.0).pass);
    CHECK_FALSE(make_check("a", "c", 1.0, "<", 1.0).pass);
    CHECK(make_check("a", "c", 2.0, ">", 1.0).pass);
    CHECK_FALSE(make_check("a", "c", std::nan(""), "<=", 1.0).pass);
    CHECK_THROWS(make_check("a", "c", 1.0, "==", 1.0));
}

TEST_CASE("standing-wave run is deterministic and writes its report") {
    auto c = small_wave();
    auto a = run_scenario(c);
    auto b = run_scenario(c);
    CHECK(a.verdict_json() == b.verdict_json());
    CHECK(a.passed());
    CHECK(a.check("residual").pass);

    auto dir = fs::temp_directory_path() / "aclab_test_report";
    fs::remove_all(dir);
    write_report(a, dir);
    for (const char* f : {"diagnostics.csv", "verdict.json", "manifest.json"}) CHECK(fs::exists(dir / f));
    std::ifstream in(dir / "verdict.json");
    auto doc = nlohmann::json::parse(in);
    CHECK(doc.contains("checks"));
    fs::remove_all(dir);

    CHECK_THROWS(a.check("no such check"));
}

TEST_CASE("circle radius") {
    Grid g(2, 256, 1.4);
    for (double R : {0.2, 0.3, 0.35}) {
        auto u = prepare_interface(g, 0.02, sphere_distance(Vec{}, R));
        CHECK(circle_radius(u) == doctest::Approx(R).epsilon(1e-6));
    }
}

TEST_CASE("density ratio of a flat wave") {
    // n = 1: alpha 2r 2r^2 / r^3 = 4 alpha
    Grid g(2, 256, 1.0);
    double eps = 0.01;
    auto u = prepare_interface(g, eps, slab_distance(g));
    std::vector<ScalarField> frames;
    for (int k = 0; k <= 20; ++k) frames.push_back(u.at_time(0.01 * k));
    Trajectory tr(std::move(frames), 0.01);
    auto p = density_ratio_profile(tr, Vec{}, 0.1, {0.1, 0.2}, 0.1);
    CHECK(p.in_transition);
    for (const auto& r : p.ratios) CHECK(r.ratio == doctest::Approx(16.0 / 3.0).epsilon(0.02));
    CHECK(p.min_ratio() <= p.ratios.front().ratio);
}

TEST_CASE("no cancellation on the standing wave") {
    // with psi = 1 the two profile integrals agree exactly; a bump that varies across
    // the layer sees an eps^2 mismatch
    std::vector<double> bump;
    for (double eps : {0.05, 0.025}) {
        Grid g(2, static_cast<int>(std::lround(12.8 / eps)), 2.0);
        auto u = prepare_interface(g, eps, slab_distance(g));
        Trajectory tr({u, u.at_time(0.01)}, 0.01);
        CHECK(no_cancellation_check(tr, {TestFunction::constant_one()}, {0.0, 0.01}) <= 1e-4);
        bump.push_back(no_cancellation_check(tr, {TestFunction::radial_bump(Vec{0.1, 0.0, 0}, 0.4)}, {0.0}));
    }
    CHECK(bump[0] / bump[1] >= 3.0);
}

TEST_CASE("stress divergence study refines") {
    auto d = stress_divergence_study(3);
    REQUIRE(d.size() == 3);
    CHECK(d[1] < d[0]);
    CHECK(d[2] < d[1]);
}
