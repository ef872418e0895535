#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aclab/diagnostics.hpp"
#include "aclab/field.hpp"
#include "aclab/solver.hpp"
#include "aclab/test_function.hpp"

namespace aclab {

enum class Scenario {
    standing_wave,
    shrinking_circle,
    excess_decay,
    no_cancellation,
    monotonicity_sweep,
    inequality_ratios,
};

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);
std::vector<std::string> scenario_names();

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

// One document per run. Lists in `points` and `epsilon` describe a sweep; a
// single `points` entry is shared by every epsilon. Time steps are given as
// multiples of eps^2.
struct ExperimentConfig {
    Scenario scenario = Scenario::standing_wave;
    int dim = 2;
    double extent = 1.0;
    std::vector<int> points{256};
    std::vector<double> epsilon{0.02};

    Scheme scheme = Scheme::semi_implicit;
    double dt_factor = 0.02;
    double t_end = 0.0;
    int frames = 40;  // stored frames after the initial one

    double radius = 0.35;          // circle radius R0
    double amplitude_ratio = 0.5;  // perturbation amplitude a / eps
    double weak_l1_amplitude = 0.06;  // absolute amplitude of the steeper run for the good/bad partition
    int mode = 1;
    double slope = 0.5;            // tilted wave
    double theta = 0.25;
    double cylinder_radius = 0.1;  // R of the excess-decay cylinder
    std::vector<double> thresholds{0.01, 0.02, 0.04};  // l
    double band = 0.1;             // b
    double k1 = 10.0;
    double heat_time = 0.01;
    double reference_epsilon = 0.02;  // sweep entry used for single-epsilon checks

    // time step checks on the circle
    double dissipation_dt_factor = 0.25;
    double brakke_dt_factor = 0.005;
    double brakke_t_end = 0.002;

    std::uint64_t seed = 1;
    std::string out_dir;

    static ExperimentConfig defaults(Scenario s);
    // Missing keys take the scenario defaults; unknown keys are errors.
    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;

    int points_for(std::size_t sweep_index) const;
    Grid grid_for(std::size_t sweep_index) const;
    // Distance from the interface to the box boundary, per the scenario geometry.
    double interface_margin(std::size_t sweep_index) const;
    std::vector<std::string> violations() const;
    void validate() const;  // throws ConfigError
};

struct Check {
    std::string id;
    std::string claim;  // identifier of the claim exercised
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation;  // "<=", ">=", "<", ">"
    bool applicable = true;
    bool pass = false;
    std::string note;
};

Check make_check(std::string id, std::string claim, double value, std::string relation, double tolerance,
                 std::string note = {});

struct ScenarioReport {
    Scenario scenario = Scenario::standing_wave;
    ExperimentConfig config;
    std::vector<Check> checks;
    std::vector<DiagnosticsRecord> records;
    std::map<std::string, double> measurements;
    std::map<std::string, std::vector<double>> series;
    std::vector<std::pair<std::string, ScalarField>> snapshots;
    std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV text

    bool passed() const;
    const Check& check(const std::string& id) const;
    std::string verdict_json() const;
    std::string manifest_json() const;
};

ScenarioReport run_scenario(const ExperimentConfig& config);
// diagnostics.csv, verdict.json, manifest.json, the snapshots and the extra tables.
void write_report(const ScenarioReport& report, const std::filesystem::path& dir);

// Well-prepared initial data of the scenario for sweep entry i.
ScalarField initial_field(const ExperimentConfig& config, std::size_t sweep_index);
SolverConfig solver_config(const ExperimentConfig& config, std::size_t sweep_index, double dt_factor,
                           double t_end, int frames);

struct DensityRatio {
    double radius = 0.0;
    double ratio = 0.0;
};

struct DensityProfile {
    std::vector<DensityRatio> ratios;
    bool in_transition = true;  // |u(center, t0)| <= 1 - b
    double min_ratio() const;
};

// r^{-n-2} int_{P_r(center, t0)} (eps|grad u|^2/2 + W/eps) per radius.
DensityProfile density_ratio_profile(const Trajectory& tr, const Vec& center, double t0,
                                     const std::vector<double>& radii, double b);

// max over the family and the given frame times of
// |int psi (alpha |grad u| - 2 e)| / mu_t(box).
double no_cancellation_check(const Trajectory& tr, const std::vector<TestFunction>& family,
                             const std::vector<double>& times);

struct ExcessRow {
    double epsilon = 0.0;
    double tilt = 0.0;         // E(P_R) with respect to e_{n+1}
    double discrepancy = 0.0;  // R^{-n-2} int_{P_R} |xi|
    double willmore = 0.0;     // int_{P_R} eps (d_t u)^2
    double wrong_direction_tilt = 0.0;  // E(P_R) with respect to e_1
    double dirichlet = 0.0;    // R^{-n-2} int_{P_R} eps |grad u|^2
};

// Perturbed flat runs per epsilon of the config, measured on P_R(x0, R^2).
std::vector<ExcessRow> excess_convergence_sweep(const ExperimentConfig& config);

// Stress-energy divergence defect of one band-limited random field sampled on
// N = 16, 32, 64 (relative to max |eps r grad u|).
std::vector<double> stress_divergence_study(std::uint64_t seed, double epsilon = 0.1);

// Zero level radius of a circle centered at the origin, from the vertical
// column through the center.
double circle_radius(const ScalarField& u);

}  // namespace aclab
