#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aclab/diagnostics.hpp"
#include "aclab/experiment.hpp"
#include "aclab/field_io.hpp"
#include "aclab/solver.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

aclab::ExperimentConfig load(const std::string& scenario, const std::string& config_path,
                             std::optional<std::uint64_t> seed) {
    aclab::ExperimentConfig c;
    if (!config_path.empty()) {
        c = aclab::ExperimentConfig::from_json(slurp(config_path));
        if (!scenario.empty() && aclab::parse_scenario(scenario) != c.scenario)
            throw aclab::ConfigError({"config scenario " + aclab::to_string(c.scenario) +
                                      " does not match the requested " + scenario});
    } else {
        c = aclab::ExperimentConfig::defaults(aclab::parse_scenario(scenario));
    }
    if (seed) c.seed = *seed;
    return c;
}

void print_checks(const aclab::ScenarioReport& r) {
    for (const auto& c : r.checks) {
        const char* verdict = !c.applicable ? "n/a " : (c.pass ? "PASS" : "FAIL");
        std::printf("%s  %-28s %.6g %s %.6g", verdict, c.id.c_str(), c.value, c.relation.c_str(), c.tolerance);
        if (!c.note.empty()) std::printf("  (%s)", c.note.c_str());
        std::printf("\n");
    }
}

// "x,y[,z],t,r" -> cylinder
aclab::Region parse_region(const std::string& spec, int dim) {
    if (spec.empty() || spec == "box") return aclab::Region::whole_box();
    std::vector<double> v;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (static_cast<int>(v.size()) != dim + 2)
        throw std::invalid_argument("region needs " + std::to_string(dim) + " coordinates, a time and a radius");
    aclab::ParabolicCylinder c;
    for (int a = 0; a < dim; ++a) c.center[a] = v[a];
    c.center_time = v[dim];
    c.radius = v[dim + 1];
    return aclab::Region::cylinder(c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Allen-Cahn flow lab: simulations and geometric diagnostics"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;

    auto* exp = app.add_subcommand("experiment", "run a scenario and write its report");
    std::string scenario;
    exp->add_option("scenario", scenario, "scenario name")
        ->required()
        ->check(CLI::IsMember(aclab::scenario_names()));
    exp->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);
    exp->add_option("--out", out_dir, "output directory");
    exp->add_option("--seed", seed, "random seed");

    auto* sim = app.add_subcommand("simulate", "evolve the scenario's initial data and write frames");
    sim->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--seed", seed, "random seed");

    auto* diag = app.add_subcommand("diagnose", "diagnostics of stored fields as CSV");
    std::vector<std::string> files;
    std::string region_spec = "box";
    diag->add_option("fields", files, "field files")->required()->check(CLI::ExistingFile);
    diag->add_option("--region", region_spec, "'box' or x,y[,z],t,r of a parabolic cylinder");
    diag->add_option("--out", out_dir, "CSV file (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*exp) {
            auto c = load(scenario, config_path, seed);
            if (!out_dir.empty()) c.out_dir = out_dir;
            if (c.out_dir.empty()) c.out_dir = "out/" + aclab::to_string(c.scenario);
            auto report = aclab::run_scenario(c);
            aclab::write_report(report, c.out_dir);
            print_checks(report);
            std::printf("%s: %s (report in %s)\n", aclab::to_string(c.scenario).c_str(),
                        report.passed() ? "all checks passed" : "some checks failed", c.out_dir.c_str());
            return report.passed() ? 0 : 1;
        }
        if (*sim) {
            auto c = load("", config_path, seed);
            if (!out_dir.empty()) c.out_dir = out_dir;
            if (c.out_dir.empty()) c.out_dir = "out/simulate";
            c.validate();
            fs::create_directories(c.out_dir);
            auto s = aclab::solver_config(c, 0, c.dt_factor, c.t_end, c.frames);
            std::ofstream csv(fs::path(c.out_dir) / "diagnostics.csv");
            csv << aclab::diagnostics_csv_header() << '\n';
            int k = 0;
            aclab::evolve(aclab::initial_field(c, 0), s, [&](const aclab::ScalarField& f) {
                csv << aclab::to_csv_row(aclab::diagnose(f, aclab::Region::whole_box())) << '\n';
                char name[32];
                std::snprintf(name, sizeof name, "frame_%04d.field", k++);
                aclab::write_field(fs::path(c.out_dir) / name, f);
            });
            std::printf("wrote %d frames to %s\n", k, c.out_dir.c_str());
            return 0;
        }
        if (*diag) {
            std::ofstream file;
            std::ostream* out = &std::cout;
            if (!out_dir.empty()) {
                file.open(out_dir);
                if (!file) throw std::runtime_error("cannot write " + out_dir);
                out = &file;
            }
            *out << aclab::diagnostics_csv_header() << '\n';
            for (const auto& f : files) {
                auto u = aclab::read_field(fs::path(f));
                *out << aclab::to_csv_row(aclab::diagnose(u, parse_region(region_spec, u.grid().dim()))) << '\n';
            }
            return 0;
        }
    } catch (const aclab::ConfigError& e) {
        std::fprintf(stderr, "config error:\n");
        for (const auto& v : e.violations()) std::fprintf(stderr, "  - %s\n", v.c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
