// Runs every scenario with its default configuration and prints one line per
// acceptance criterion. Exit status 0 iff every criterion passes.
//
//   acceptance [out_dir]     reports are written below out_dir when given

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aclab/experiment.hpp"

using namespace aclab;

namespace {

struct Ref {
    std::string run;
    std::string check;
};

struct Criterion {
    int number;
    std::string title;
    std::vector<Ref> refs;
};

std::string describe(const Check& c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s=%.4g %s %.4g%s", c.id.c_str(), c.value, c.relation.c_str(), c.tolerance,
                  c.applicable ? "" : " (n/a)");
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    std::filesystem::path out = argc > 1 ? argv[1] : "";

    std::map<std::string, ExperimentConfig> runs;
    for (const auto& n : scenario_names()) runs[n] = ExperimentConfig::defaults(parse_scenario(n));
    // the 2-d standing wave carries the good/bad partition and the flat density ratio
    auto flat = ExperimentConfig::defaults(Scenario::standing_wave);
    flat.dim = 2;
    flat.extent = 1.0;
    flat.points = {256};
    flat.epsilon = {0.02};
    flat.t_end = 0.125;
    flat.frames = 50;
    runs["standing-wave-2d"] = flat;

    std::map<std::string, ScenarioReport> reports;
    for (auto& [name, c] : runs) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.validate();
            reports[name] = run_scenario(c);
        } catch (const std::exception& e) {
            std::printf("run %-20s ERROR %s\n", name.c_str(), e.what());
            continue;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("run %-20s %s in %.1f s\n", name.c_str(), reports[name].passed() ? "ok" : "has failing checks", secs);
        if (!out.empty()) write_report(reports[name], out / name);
    }

    std::vector<Ref> distance;
    for (const auto& [name, c] : runs) distance.push_back({name, "distance_gradient"});

    const std::vector<Criterion> criteria{
        {1, "standing-wave exactness",
         {{"standing-wave", "residual"},
          {"standing-wave", "energy_vs_alpha"},
          {"standing-wave", "discrepancy_max"},
          {"standing-wave", "stationary"}}},
        {2, "energy dissipation identity",
         {{"shrinking-circle", "dissipation"}, {"shrinking-circle", "dissipation_refinement"}}},
        {3, "Brakke identity with compact test function",
         {{"shrinking-circle", "brakke_direct"}, {"shrinking-circle", "brakke_tensor"}}},
        {4, "stress-energy divergence refinement", {{"inequality-ratios", "stress_refinement"}}},
        {5, "weighted monotonicity",
         {{"monotonicity-sweep", "density_nonincreasing"}, {"monotonicity-sweep", "monotonicity_refinement"}}},
        {6, "shrinking circle against curvature flow",
         {{"shrinking-circle", "radius"}, {"shrinking-circle", "radius_trend"}}},
        {7, "excess convergence sweep",
         {{"excess-decay", "tilt_decreases"},
          {"excess-decay", "discrepancy_decreases"},
          {"excess-decay", "willmore_decreases"},
          {"excess-decay", "tilted_frame_control"}}},
        {8, "heat equation blow-up", {{"excess-decay", "heat_reference"}, {"excess-decay", "heat_trend"}}},
        {9, "excess decay", {{"excess-decay", "decay_ratio"}, {"excess-decay", "tilt_constant_stability"}}},
        {10, "Caccioppoli and Sobolev ratios",
         {{"inequality-ratios", "caccioppoli_tilted"},
          {"inequality-ratios", "sobolev_tilted"},
          {"inequality-ratios", "caccioppoli_circle"},
          {"inequality-ratios", "sobolev_circle"}}},
        {11, "distance function bound", distance},
        {12, "maximal function and weak L1",
         {{"excess-decay", "weak_l1_stability"}, {"standing-wave-2d", "bad_set_empty"}}},
        {13, "no cancellation", {{"no-cancellation", "defect"}, {"no-cancellation", "defect_trend"}}},
        {14, "density lower bound", {{"standing-wave-2d", "flat_density"}, {"monotonicity-sweep", "circle_density"}}},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        bool pass = true;
        std::string detail;
        for (const auto& ref : cr.refs) {
            if (!detail.empty()) detail += "; ";
            auto it = reports.find(ref.run);
            if (it == reports.end()) {
                pass = false;
                detail += ref.run + " did not run";
                continue;
            }
            try {
                const auto& c = it->second.check(ref.check);
                pass = pass && c.pass;
                detail += (cr.refs.size() > 4 ? ref.run + ":" : std::string()) + describe(c) + (c.pass ? "" : " FAIL");
            } catch (const std::exception&) {
                pass = false;
                detail += ref.run + ":" + ref.check + " missing";
            }
        }
        if (!pass) ++failed;
        std::printf("ACC%-2d %s  %s: %s\n", cr.number, pass ? "PASS" : "FAIL", cr.title.c_str(), detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
