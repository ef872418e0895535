#include "aclab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <span>
#include <sstream>

#include <json.hpp>

#include "aclab/field_io.hpp"
#include "aclab/interfaces.hpp"
#include "aclab/levelset.hpp"
#include "aclab/monotonicity.hpp"
#include "aclab/quadrature.hpp"

namespace aclab {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_table() {
    static const std::vector<std::pair<Scenario, std::string>> t{
        {Scenario::standing_wave, "standing-wave"},
        {Scenario::shrinking_circle, "shrinking-circle"},
        {Scenario::excess_decay, "excess-decay"},
        {Scenario::no_cancellation, "no-cancellation"},
        {Scenario::monotonicity_sweep, "monotonicity-sweep"},
        {Scenario::inequality_ratios, "inequality-ratios"},
    };
    return t;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

bool circle_like(Scenario s) {
    return s == Scenario::shrinking_circle || s == Scenario::no_cancellation || s == Scenario::monotonicity_sweep;
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
    for (const auto& [s, n] : scenario_table())
        if (n == name) return s;
    throw std::invalid_argument("unknown scenario '" + name + "' (expected one of " + join(scenario_names(), ", ") +
                                ")");
}

std::string to_string(Scenario s) {
    for (const auto& [k, n] : scenario_table())
        if (k == s) return n;
    return "unknown";
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (const auto& e : scenario_table()) out.push_back(e.second);
    return out;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument("invalid experiment config: " + join(violations, "; ")),
      violations_(std::move(violations)) {}

ExperimentConfig ExperimentConfig::defaults(Scenario s) {
    ExperimentConfig c;
    c.scenario = s;
    switch (s) {
        case Scenario::standing_wave:
            c.dim = 1;
            c.extent = 4.0;
            c.points = {4096};
            c.epsilon = {0.05};
            c.dt_factor = 0.25;
            c.t_end = 1.0;
            c.frames = 20;
            break;
        case Scenario::shrinking_circle:
        case Scenario::no_cancellation:
            c.dim = 2;
            c.extent = 1.4;
            c.points = {320, 160};
            c.epsilon = {0.02, 0.04};
            c.t_end = 0.04;
            break;
        case Scenario::monotonicity_sweep:
            c.dim = 2;
            c.extent = 1.4;
            c.points = {320};
            c.epsilon = {0.02};
            c.t_end = 0.04;
            break;
        case Scenario::excess_decay:
            c.dim = 2;
            c.extent = 1.0;
            c.points = {128, 256, 512};
            c.epsilon = {0.04, 0.02, 0.01};
            c.dt_factor = 0.05;
            c.t_end = 0.02;
            break;
        case Scenario::inequality_ratios:
            c.dim = 2;
            c.extent = 1.4;
            c.points = {320, 640};
            c.epsilon = {0.02, 0.01};
            c.radius = 0.25;
            c.t_end = 0.0;
            c.frames = 1;
            break;
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});
    if (!doc.contains("scenario") || !doc["scenario"].is_string())
        throw ConfigError({"config needs a string 'scenario' (one of " + join(scenario_names(), ", ") + ")"});
    ExperimentConfig c;
    try {
        c = defaults(parse_scenario(doc["scenario"].get<std::string>()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError({e.what()});
    }

    std::vector<std::string> errors;
    auto number = [&](const json& v, const std::string& key, double& out) {
        if (!v.is_number()) errors.push_back("'" + key + "' must be a number");
        else out = v.get<double>();
    };
    auto integer = [&](const json& v, const std::string& key, int& out) {
        if (!v.is_number_integer()) errors.push_back("'" + key + "' must be an integer");
        else out = v.get<int>();
    };
    auto numbers = [&](const json& v, const std::string& key, std::vector<double>& out) {
        if (v.is_number()) out = {v.get<double>()};
        else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); }))
            out = v.get<std::vector<double>>();
        else errors.push_back("'" + key + "' must be a number or a list of numbers");
    };

    for (const auto& [key, v] : doc.items()) {
        if (key == "scenario") continue;
        if (key == "dim") integer(v, key, c.dim);
        else if (key == "extent") number(v, key, c.extent);
        else if (key == "points") {
            if (v.is_number_integer()) c.points = {v.get<int>()};
            else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); }))
                c.points = v.get<std::vector<int>>();
            else errors.push_back("'points' must be an integer or a list of integers");
        } else if (key == "epsilon") numbers(v, key, c.epsilon);
        else if (key == "scheme") {
            if (!v.is_string()) errors.push_back("'scheme' must be a string");
            else {
                try {
                    c.scheme = parse_scheme(v.get<std::string>());
                } catch (const std::invalid_argument& e) {
                    errors.push_back(e.what());
                }
            }
        } else if (key == "dt_factor") number(v, key, c.dt_factor);
        else if (key == "t_end") number(v, key, c.t_end);
        else if (key == "frames") integer(v, key, c.frames);
        else if (key == "radius") number(v, key, c.radius);
        else if (key == "amplitude_ratio") number(v, key, c.amplitude_ratio);
        else if (key == "weak_l1_amplitude") number(v, key, c.weak_l1_amplitude);
        else if (key == "mode") integer(v, key, c.mode);
        else if (key == "slope") number(v, key, c.slope);
        else if (key == "theta") number(v, key, c.theta);
        else if (key == "cylinder_radius") number(v, key, c.cylinder_radius);
        else if (key == "thresholds") numbers(v, key, c.thresholds);
        else if (key == "band") number(v, key, c.band);
        else if (key == "k1") number(v, key, c.k1);
        else if (key == "heat_time") number(v, key, c.heat_time);
        else if (key == "reference_epsilon") number(v, key, c.reference_epsilon);
        else if (key == "dissipation_dt_factor") number(v, key, c.dissipation_dt_factor);
        else if (key == "brakke_dt_factor") number(v, key, c.brakke_dt_factor);
        else if (key == "brakke_t_end") number(v, key, c.brakke_t_end);
        else if (key == "seed") {
            if (!v.is_number_unsigned()) errors.push_back("'seed' must be a non-negative integer");
            else c.seed = v.get<std::uint64_t>();
        } else if (key == "out") {
            if (!v.is_string()) errors.push_back("'out' must be a string");
            else c.out_dir = v.get<std::string>();
        } else errors.push_back("unknown key '" + key + "'");
    }
    if (!errors.empty()) throw ConfigError(errors);
    return c;
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["scenario"] = to_string(scenario);
    j["dim"] = dim;
    j["extent"] = extent;
    j["points"] = points;
    j["epsilon"] = epsilon;
    j["scheme"] = to_string(scheme);
    j["dt_factor"] = dt_factor;
    j["t_end"] = t_end;
    j["frames"] = frames;
    j["radius"] = radius;
    j["amplitude_ratio"] = amplitude_ratio;
    j["weak_l1_amplitude"] = weak_l1_amplitude;
    j["mode"] = mode;
    j["slope"] = slope;
    j["theta"] = theta;
    j["cylinder_radius"] = cylinder_radius;
    j["thresholds"] = thresholds;
    j["band"] = band;
    j["k1"] = k1;
    j["heat_time"] = heat_time;
    j["reference_epsilon"] = reference_epsilon;
    j["dissipation_dt_factor"] = dissipation_dt_factor;
    j["brakke_dt_factor"] = brakke_dt_factor;
    j["brakke_t_end"] = brakke_t_end;
    j["seed"] = seed;
    if (!out_dir.empty()) j["out"] = out_dir;
    return j.dump(2);
}

int ExperimentConfig::points_for(std::size_t i) const {
    if (points.empty()) throw std::logic_error("config has no grid sizes");
    if (points.size() == 1) return points.front();
    return points.at(i);
}

Grid ExperimentConfig::grid_for(std::size_t i) const { return Grid(dim, points_for(i), extent); }

double ExperimentConfig::interface_margin(std::size_t i) const {
    double half = 0.5 * extent;
    switch (scenario) {
        case Scenario::standing_wave: return half;
        case Scenario::excess_decay:
            return half - std::max(amplitude_ratio * epsilon.at(i), weak_l1_amplitude);
        case Scenario::inequality_ratios: return std::min(half - 0.5 * slope * extent, half - radius);
        default: return half - radius;
    }
}

std::vector<std::string> ExperimentConfig::violations() const {
    std::vector<std::string> v;
    if (dim < 1 || dim > max_dim) v.push_back("dim must be 1, 2 or 3");
    if (scenario != Scenario::standing_wave && dim < 2) v.push_back("scenario " + to_string(scenario) + " needs dim >= 2");
    if (!(extent > 0.0)) v.push_back("extent must be positive");
    if (epsilon.empty()) v.push_back("epsilon list is empty");
    if (points.empty()) v.push_back("points list is empty");
    if (points.size() > 1 && points.size() != epsilon.size())
        v.push_back("points must have one entry or one per epsilon");
    for (int n : points)
        if (n < 8 || n % 2) v.push_back("points " + std::to_string(n) + " must be even and >= 8");
    if (!v.empty()) return v;

    for (std::size_t i = 0; i < epsilon.size(); ++i) {
        double eps = epsilon[i];
        if (!(eps > 0.0)) {
            v.push_back("epsilon " + fmt(eps) + " must be positive");
            continue;
        }
        double h = extent / points_for(i);
        if (eps < 4.0 * h * (1 - 1e-12))
            v.push_back("resolution rule eps >= 4*spacing: epsilon " + fmt(eps) + " < " + fmt(4.0 * h) +
                        " at points " + std::to_string(points_for(i)));
        double m = interface_margin(i);
        if (m < 8.0 * eps * (1 - 1e-12))
            v.push_back("margin rule: interface margin " + fmt(m) + " < 8*epsilon = " + fmt(8.0 * eps));
        if (scheme == Scheme::semi_implicit && dt_factor > 0.5)
            v.push_back("semi-implicit time step needs dt_factor <= 0.5");
    }
    if (scenario == Scenario::inequality_ratios && epsilon.size() >= 2 && points.size() >= 2) {
        double h = extent / points[1];
        if (epsilon[0] < 4.0 * h) v.push_back("resolution rule eps >= 4*spacing fails for the refined grid");
    }
    if (!(dt_factor > 0.0)) v.push_back("dt_factor must be positive");
    if (!(t_end >= 0.0)) v.push_back("t_end must be non-negative");
    if (frames < 1) v.push_back("frames must be >= 1");
    if (!(theta > 0.0 && theta < 1.0)) v.push_back("theta must lie in (0, 1)");
    if (!(band > 0.0 && band < 1.0)) v.push_back("band b must lie in (0, 1)");
    if (thresholds.empty()) v.push_back("thresholds list is empty");
    for (double l : thresholds)
        if (!(l > 0.0)) v.push_back("threshold " + fmt(l) + " must be positive");
    if (mode < 1) v.push_back("mode must be >= 1");
    if (!(radius > 0.0)) v.push_back("radius must be positive");
    if (!(cylinder_radius > 0.0)) v.push_back("cylinder_radius must be positive");

    if (circle_like(scenario) && !(t_end > 0.0)) v.push_back("circle scenarios need t_end > 0");
    if (circle_like(scenario) && t_end >= 0.5 * radius * radius)
        v.push_back("t_end must come before the extinction time R0^2/2");
    if (scenario == Scenario::shrinking_circle || scenario == Scenario::monotonicity_sweep) {
        if (!(brakke_t_end > 0.0 && brakke_dt_factor > 0.0)) v.push_back("brakke run needs positive t_end and dt");
        if (!(dissipation_dt_factor > 0.0 && dissipation_dt_factor <= 0.5))
            v.push_back("dissipation_dt_factor must lie in (0, 0.5]");
    }
    if (scenario == Scenario::excess_decay) {
        double R = cylinder_radius;
        if (t_end < 2.0 * R * R * (1 - 1e-12)) v.push_back("t_end must cover the cylinder window 2 R^2");
        if (!(heat_time > 0.0 && heat_time <= t_end)) v.push_back("heat_time must lie in (0, t_end]");
        if (R > 0.5 * extent - 0.125 * extent) v.push_back("cylinder leaves the box");
        if (!(weak_l1_amplitude > 0.0)) v.push_back("weak_l1_amplitude must be positive");
        if (std::none_of(epsilon.begin(), epsilon.end(),
                         [&](double e) { return std::abs(e - reference_epsilon) <= 1e-12; }))
            v.push_back("reference_epsilon must be one of the epsilon entries");
    }
    if (scenario == Scenario::standing_wave && dim >= 2 && t_end < 4.0 * cylinder_radius * cylinder_radius)
        v.push_back("t_end must cover the maximal-function windows 4 R^2");
    return v;
}

void ExperimentConfig::validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(v);
}

Check make_check(std::string id, std::string claim, double value, std::string relation, double tolerance,
                 std::string note) {
    Check c;
    c.id = std::move(id);
    c.claim = std::move(claim);
    c.value = value;
    c.tolerance = tolerance;
    c.relation = std::move(relation);
    c.note = std::move(note);
    if (std::isnan(value)) c.pass = false;
    else if (c.relation == "<=") c.pass = value <= tolerance;
    else if (c.relation == "<") c.pass = value < tolerance;
    else if (c.relation == ">=") c.pass = value >= tolerance;
    else if (c.relation == ">") c.pass = value > tolerance;
    else throw std::invalid_argument("unknown relation " + c.relation);
    return c;
}

namespace {

Check not_applicable(std::string id, std::string claim, double value, std::string relation, double tolerance,
                     std::string note) {
    Check c = make_check(std::move(id), std::move(claim), value, std::move(relation), tolerance, std::move(note));
    c.applicable = false;
    c.pass = true;
    return c;
}

json check_json(const Check& c) {
    json j;
    j["id"] = c.id;
    j["claim"] = c.claim;
    j["value"] = c.value;
    j["relation"] = c.relation;
    j["tolerance"] = c.tolerance;
    j["applicable"] = c.applicable;
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

}  // namespace

bool ScenarioReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check& ScenarioReport::check(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return c;
    throw std::out_of_range("no check named " + id);
}

std::string ScenarioReport::verdict_json() const {
    json j;
    j["scenario"] = to_string(scenario);
    j["passed"] = passed();
    j["checks"] = json::array();
    for (const auto& c : checks) j["checks"].push_back(check_json(c));
    j["measurements"] = json::object();
    for (const auto& [k, v] : measurements) j["measurements"][k] = v;
    j["series"] = json::object();
    for (const auto& [k, v] : series) j["series"][k] = v;
    return j.dump(2);
}

std::string ScenarioReport::manifest_json() const {
    json j;
    j["scenario"] = to_string(scenario);
    j["seed"] = config.seed;
    j["config"] = json::parse(config.to_json());
    std::vector<std::string> claims;
    for (const auto& c : checks)
        if (std::find(claims.begin(), claims.end(), c.claim) == claims.end()) claims.push_back(c.claim);
    j["claims"] = claims;
    j["checks"] = json::array();
    for (const auto& c : checks) {
        json e;
        e["id"] = c.id;
        e["claim"] = c.claim;
        e["value"] = c.value;
        e["tolerance"] = c.tolerance;
        e["verdict"] = !c.applicable ? "not-applicable" : (c.pass ? "pass" : "fail");
        j["checks"].push_back(e);
    }
    std::vector<std::string> outputs{"diagnostics.csv", "verdict.json", "manifest.json"};
    for (const auto& [name, f] : snapshots) outputs.push_back(name);
    j["outputs"] = outputs;
    return j.dump(2);
}

void write_report(const ScenarioReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "diagnostics.csv");
        if (!csv) throw std::runtime_error("cannot write " + (dir / "diagnostics.csv").string());
        csv << diagnostics_csv_header() << '\n';
        for (const auto& r : report.records) csv << to_csv_row(r) << '\n';
    }
    std::ofstream(dir / "verdict.json") << report.verdict_json() << '\n';
    std::ofstream(dir / "manifest.json") << report.manifest_json() << '\n';
    for (const auto& [name, f] : report.snapshots) write_field(dir / name, f);
    for (const auto& [name, text] : report.tables) std::ofstream(dir / name) << text;
}

ScalarField initial_field(const ExperimentConfig& c, std::size_t i) {
    Grid g = c.grid_for(i);
    double eps = c.epsilon.at(i);
    switch (c.scenario) {
        case Scenario::standing_wave: return prepare_interface(g, eps, slab_distance(g));
        case Scenario::excess_decay:
            return prepare_interface(g, eps,
                                     graph_distance(g, cosine_profile(c.amplitude_ratio * eps, c.extent / c.mode)));
        case Scenario::inequality_ratios:
            return prepare_interface(g, eps, graph_distance(g, tilted_profile(c.slope, c.extent, c.extent / 16.0)));
        default: return prepare_interface(g, eps, sphere_distance(Vec{}, c.radius));
    }
}

SolverConfig solver_config(const ExperimentConfig& c, std::size_t i, double dt_factor, double t_end, int frames) {
    double eps = c.epsilon.at(i);
    Grid g = c.grid_for(i);
    double target = std::min(dt_factor * eps * eps, max_stable_dt(c.scheme, g, eps));
    SolverConfig s;
    s.scheme = c.scheme;
    s.t_end = t_end;
    if (t_end == 0.0) {
        s.dt = target;
        return s;
    }
    frames = std::max(frames, 1);
    long per_frame = static_cast<long>(std::ceil(t_end / (frames * target) - 1e-9));
    per_frame = std::max(per_frame, 1L);
    s.sample_every = static_cast<int>(per_frame);
    s.dt = t_end / (static_cast<double>(per_frame) * frames);
    return s;
}

double DensityProfile::min_ratio() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : ratios) m = std::min(m, r.ratio);
    return m;
}

namespace {

std::size_t nearest_point(const Grid& g, const Vec& x) {
    std::array<int, max_dim> idx{};
    for (int a = 0; a < g.dim(); ++a) idx[a] = static_cast<int>(std::lround((x[a] + 0.5 * g.extent()) / g.spacing()));
    return g.ravel(idx);
}

}  // namespace

DensityProfile density_ratio_profile(const Trajectory& tr, const Vec& center, double t0,
                                     const std::vector<double>& radii, double b) {
    const auto& g = tr.grid();
    int n = g.dim() - 1;
    DensityProfile p;
    const auto& here = tr.frame(tr.index_at(t0));
    p.in_transition = std::abs(here[nearest_point(g, center)]) <= 1.0 - b;
    std::vector<ScalarField> dens;
    for (const auto& f : tr.frames()) dens.push_back(energy_density(f));
    Trajectory e(std::move(dens), tr.sample_interval());
    for (double r : radii) {
        double mu = integrate(e, Region::cylinder({center, t0, r}));
        p.ratios.push_back({r, std::pow(r, -n - 2) * mu});
    }
    return p;
}

double no_cancellation_check(const Trajectory& tr, const std::vector<TestFunction>& family,
                             const std::vector<double>& times) {
    const auto& g = tr.grid();
    double worst = 0.0;
    std::vector<SampledTestFunction> sampled;
    for (const auto& psi : family) sampled.push_back(psi.sample(g));
    for (double t : times) {
        const auto& u = tr.frame(tr.index_at(t));
        auto d = derivatives(u);
        double eps = u.epsilon();
        std::vector<double> bv(g.size()), mu(g.size());
        double mass = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            bv[i] = std::sqrt(d.gradient_norm2[i]);
            mu[i] = 0.5 * eps * d.gradient_norm2[i] + DoubleWell::value(u[i]) / eps;
            mass += mu[i];
        }
        if (mass <= 0.0) continue;
        for (const auto& s : sampled) {
            double diff = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) diff += s.value[i] * (DoubleWell::alpha * bv[i] - 2.0 * mu[i]);
            worst = std::max(worst, std::abs(diff) / mass);
        }
    }
    return worst;
}

double circle_radius(const ScalarField& u) {
    const auto& g = u.grid();
    if (g.dim() < 2) throw std::invalid_argument("circle radius needs dim >= 2");
    std::size_t base = 0;
    for (int a = 0; a < g.dim() - 1; ++a) base = base * g.points() + g.points() / 2;
    auto roots = column_crossings(u, base, 0.0);
    if (roots.size() != 2) throw std::runtime_error("column through the center does not cross the circle twice");
    return 0.5 * std::abs(roots[1] - roots[0]);
}

std::vector<double> stress_divergence_study(std::uint64_t seed, double epsilon) {
    constexpr int max_mode = 6;
    constexpr double decay = 2.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    struct Mode {
        int m1, m2;
        double amp, phi;
    };
    std::vector<Mode> modes;
    for (int m1 = -max_mode; m1 <= max_mode; ++m1)
        for (int m2 = 0; m2 <= max_mode; ++m2) {
            if (m2 == 0 && m1 <= 0) continue;
            double m = std::hypot(m1, m2);
            if (m > max_mode) continue;
            modes.push_back({m1, m2, std::exp(-m / decay), phase(rng)});
        }
    const double L = 1.0;
    auto field = [&](const Vec& x) {
        double s = 0.0;
        for (const auto& md : modes)
            s += md.amp * std::cos(2.0 * std::numbers::pi * (md.m1 * x[0] + md.m2 * x[1]) / L + md.phi);
        return s;
    };
    Grid finest(2, 64, L);
    auto ref = ScalarField::sample(finest, epsilon, field);
    double scale = 0.9 / ref.max_abs();

    std::vector<double> out;
    for (int n : {16, 32, 64}) {
        Grid g(2, n, L);
        auto u = ScalarField::sample(g, epsilon, [&](const Vec& x) { return scale * field(x); });
        auto d = derivatives(u);
        double size = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            size = std::max(size, epsilon * std::abs(d.residual[i]) * std::sqrt(d.gradient_norm2[i]));
        out.push_back(divergence_defect(u) / size);
    }
    return out;
}

namespace {

constexpr const char* claim_standing = "standing-wave-profile";
constexpr const char* claim_dissipation = "energy-dissipation-identity";
constexpr const char* claim_brakke = "brakke-identity";
constexpr const char* claim_stress = "stress-energy-divergence";
constexpr const char* claim_monotonicity = "weighted-monotonicity";
constexpr const char* claim_mcf = "mean-curvature-limit";
constexpr const char* claim_excess = "excess-convergence";
constexpr const char* claim_heat = "heat-equation-blow-up";
constexpr const char* claim_decay = "excess-decay";
constexpr const char* claim_inequalities = "caccioppoli-sobolev-inequalities";
constexpr const char* claim_distance = "distance-function-bound";
constexpr const char* claim_weak_l1 = "maximal-function-weak-l1";
constexpr const char* claim_no_cancel = "no-cancellation";
constexpr const char* claim_density = "density-lower-bound";
constexpr const char* claim_discrepancy = "discrepancy-sign";

double max_distance_gradient(const Trajectory& tr) {
    double m = 0.0;
    for (const auto& f : tr.frames()) m = std::max(m, aclab::max_distance_gradient(f));
    return m;
}

// max xi / max e over the run
double discrepancy_excursion(const Trajectory& tr) {
    double xi = -std::numeric_limits<double>::infinity(), e = 0.0;
    for (const auto& f : tr.frames()) {
        auto d = derivatives(f);
        double eps = f.epsilon();
        for (std::size_t i = 0; i < f.size(); ++i) {
            double k = 0.5 * eps * d.gradient_norm2[i], w = DoubleWell::value(f[i]) / eps;
            xi = std::max(xi, k - w);
            e = std::max(e, k + w);
        }
    }
    return e > 0 ? xi / e : 0.0;
}

double spread(const std::vector<double>& v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
    if (!(lo > 0.0) || !std::isfinite(hi)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

double max_step_ratio(const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        worst = std::max(worst, v[i] > 0 ? v[i + 1] / v[i] : std::numeric_limits<double>::infinity());
    return worst;
}

std::vector<double> geometric_radii(double lo, double hi, double factor) {
    std::vector<double> r;
    for (double x = lo; x <= hi * (1 + 1e-12); x *= factor) r.push_back(x);
    return r;
}

std::size_t reference_index(const ExperimentConfig& c) {
    for (std::size_t i = 0; i < c.epsilon.size(); ++i)
        if (std::abs(c.epsilon[i] - c.reference_epsilon) <= 1e-12) return i;
    return 0;
}

DissipationDefect streaming_dissipation(const ScalarField& u0, const SolverConfig& s) {
    double e_first = 0.0, e_last = 0.0, diss = 0.0, prev = 0.0;
    bool first = true;
    double interval = s.dt * s.sample_every;
    evolve(u0, s, [&](const ScalarField& f) {
        auto d = derivatives(f);
        double eps = f.epsilon(), e = 0.0, w = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            e += 0.5 * eps * d.gradient_norm2[i] + DoubleWell::value(f[i]) / eps;
            w += eps * d.residual[i] * d.residual[i];
        }
        e *= f.grid().cell_volume();
        w *= f.grid().cell_volume();
        if (first) e_first = e;
        else diss += 0.5 * interval * (prev + w);
        first = false;
        prev = w;
        e_last = e;
    });
    DissipationDefect out;
    out.energy_change = e_last - e_first;
    out.dissipation = diss;
    out.defect = std::abs(out.energy_change + diss);
    out.relative_defect = out.energy_change != 0.0 ? out.defect / std::abs(out.energy_change) : 0.0;
    return out;
}

void add_distance_check(ScenarioReport& r, double value) {
    r.measurements["max_distance_gradient"] = value;
    r.checks.push_back(make_check("distance_gradient", claim_distance, value, "<=", 1.0 + 1e-3));
}

void add_records(ScenarioReport& r, const Trajectory& tr, const Region& region) {
    auto recs = diagnose(tr, region);
    r.records.insert(r.records.end(), recs.begin(), recs.end());
}

ScenarioReport standing_wave(const ExperimentConfig& c) {
    ScenarioReport r;
    auto u0 = initial_field(c, 0);
    const auto& g = u0.grid();
    int v = g.vertical_axis();
    double L = g.extent();
    auto d = derivatives(u0);
    double res = 0.0, disc = 0.0, e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (std::abs(g.position(i)[v]) > 0.25 * L) continue;
        double k = 0.5 * u0.epsilon() * d.gradient_norm2[i], w = DoubleWell::value(u0[i]) / u0.epsilon();
        res = std::max(res, std::abs(d.residual[i]));
        disc = std::max(disc, std::abs(k - w));
        e += k + w;
    }
    double area = std::pow(L, g.dim() - 1);
    double per_area = e * g.cell_volume() / area;
    r.measurements["energy_per_area"] = per_area;
    r.measurements["residual_max"] = res;
    r.measurements["discrepancy_max"] = disc;
    if (g.dim() == 1) {
        r.checks.push_back(make_check("residual", claim_standing, res, "<=", 1e-7));
        r.checks.push_back(make_check("discrepancy_max", claim_standing, disc, "<=", 1e-8));
    } else {
        // the pointwise tolerances are pinned for the 1-d resolution
        const char* note = "tolerance pinned for the 1-d profile";
        r.checks.push_back(not_applicable("residual", claim_standing, res, "<=", 1e-7, note));
        r.checks.push_back(not_applicable("discrepancy_max", claim_standing, disc, "<=", 1e-8, note));
    }
    r.checks.push_back(make_check("energy_vs_alpha", claim_standing, std::abs(per_area - DoubleWell::alpha), "<=", 1e-6));

    auto s = solver_config(c, 0, c.dt_factor, c.t_end, c.frames);
    auto tr = evolve(u0, s);
    double drift = 0.0;
    for (const auto& f : tr.frames())
        for (std::size_t i = 0; i < f.size(); ++i) drift = std::max(drift, std::abs(f[i] - u0[i]));
    r.checks.push_back(make_check("stationary", claim_standing, drift, "<=", 1e-6));
    add_distance_check(r, max_distance_gradient(tr));
    add_records(r, tr, Region::whole_box());

    if (g.dim() >= 2) {
        double R = c.cylinder_radius;
        ParabolicCylinder cyl{Vec{}, 2.0 * R * R, R};
        auto p = partition_good_bad(tr, c.thresholds.front(), c.band, cyl);
        double bad = 0.0;
        for (double l : c.thresholds) bad += static_cast<double>(rethreshold(p, l).count(CellState::bad));
        r.checks.push_back(make_check("bad_set_empty", claim_weak_l1, bad, "<=", 0.0, "bad cells summed over every l"));

        double rmax = std::min(0.25 * L, std::sqrt(0.5 * tr.end_time()));
        auto prof = density_ratio_profile(tr, Vec{}, rmax * rmax, geometric_radii(2.0 * u0.epsilon(), rmax, 1.25),
                                          c.band);
        double target = 4.0 * DoubleWell::alpha;
        double worst = 0.0;
        for (const auto& x : prof.ratios) {
            worst = std::max(worst, std::abs(x.ratio - target) / target);
            r.series["density_radius"].push_back(x.radius);
            r.series["density_ratio"].push_back(x.ratio);
        }
        r.measurements["density_min"] = prof.min_ratio();
        r.checks.push_back(make_check("flat_density", claim_density, std::abs(prof.min_ratio() - target) / target, "<=",
                                      0.05, "relative distance of the minimum ratio from 4 alpha"));
        r.measurements["density_max_deviation"] = worst;
    }
    r.snapshots.emplace_back("initial.field", tr.front());
    r.snapshots.emplace_back("final.field", tr.back());
    return r;
}

ScenarioReport shrinking_circle(const ExperimentConfig& c) {
    ScenarioReport r;
    std::vector<double> errors, extrapolated;
    double dist = 0.0;
    double exact = std::sqrt(c.radius * c.radius - 2.0 * c.t_end);
    for (std::size_t i = 0; i < c.epsilon.size(); ++i) {
        auto u0 = initial_field(c, i);
        auto tr = evolve(u0, solver_config(c, i, c.dt_factor, c.t_end, c.frames));
        double R = circle_radius(tr.back());
        errors.push_back(std::abs(R - exact) / exact);
        // the scheme is first order in time, so 2 R(dt/2) - R(dt) removes the time step error
        auto half = evolve(u0, solver_config(c, i, 0.5 * c.dt_factor, c.t_end, 1));
        double Rx = 2.0 * circle_radius(half.back()) - R;
        extrapolated.push_back(std::abs(Rx - exact) / exact);
        r.series["radius_final"].push_back(R);
        r.series["radius_error"].push_back(errors.back());
        r.series["radius_extrapolated"].push_back(Rx);
        r.series["radius_extrapolated_error"].push_back(extrapolated.back());
        dist = std::max({dist, max_distance_gradient(tr), max_distance_gradient(half)});
        if (i == 0) {
            for (const auto& f : tr.frames()) {
                r.series["time"].push_back(f.time());
                r.series["radius"].push_back(circle_radius(f));
            }
            add_records(r, tr, Region::whole_box());
            r.snapshots.emplace_back("initial.field", tr.front());
            r.snapshots.emplace_back("final.field", tr.back());
            double exc = discrepancy_excursion(tr);
            r.checks.push_back(make_check("discrepancy_sign", claim_discrepancy, exc, "<=", 1e-3));
        }
    }
    r.measurements["radius_exact"] = exact;
    r.checks.push_back(make_check("radius", claim_mcf, errors.front(), "<=", 0.02));
    if (errors.size() >= 2)
        r.checks.push_back(make_check("radius_trend", claim_mcf, extrapolated[0] - extrapolated[1], "<", 0.0,
                                      "error(first eps) - error(second eps), time step extrapolated"));
    add_distance_check(r, dist);

    // dissipation identity at the coarse time step and after halving it
    auto u0 = initial_field(c, 0);
    double eps = c.epsilon.front();
    std::vector<double> defects;
    for (double f : {c.dissipation_dt_factor, 0.5 * c.dissipation_dt_factor}) {
        int steps = static_cast<int>(std::ceil(c.t_end / (f * eps * eps) - 1e-9));
        auto s = solver_config(c, 0, f, c.t_end, steps);
        defects.push_back(streaming_dissipation(u0, s).relative_defect);
    }
    r.series["dissipation_relative_defect"] = defects;
    r.checks.push_back(make_check("dissipation", claim_dissipation, defects[0], "<=", 1e-4));
    r.checks.push_back(make_check("dissipation_refinement", claim_dissipation, defects[1] / defects[0], "<=", 0.35));

    // Brakke identity with a compactly supported phi on a short, finely stepped run
    auto tr = evolve(u0, solver_config(c, 0, c.brakke_dt_factor, c.brakke_t_end, 40));
    double tm = tr.times()[tr.size() / 2];
    double support = std::min(0.5 * c.extent - c.radius, c.radius) * 0.9;
    auto phi = TestFunction::radial_bump(Vec{c.radius, 0.0, 0.0}, support);
    auto b = brakke_residual(tr, phi, tm);
    double scale = std::abs(b.measured_rate);
    r.measurements["brakke_rate"] = b.measured_rate;
    r.measurements["brakke_rhs_direct"] = b.rhs_direct;
    r.measurements["brakke_rhs_tensor"] = b.rhs_tensor;
    r.checks.push_back(make_check("brakke_direct", claim_brakke, b.residual_direct / scale, "<=", 0.01));
    r.checks.push_back(make_check("brakke_tensor", claim_brakke, b.residual_tensor / scale, "<=", 0.01));
    return r;
}

ScenarioReport monotonicity_sweep(const ExperimentConfig& c) {
    ScenarioReport r;
    auto u0 = initial_field(c, 0);
    auto tr = evolve(u0, solver_config(c, 0, c.dt_factor, c.t_end, c.frames));
    const auto& g = tr.grid();
    int n = g.dim() - 1;
    KernelPoint kp{Vec{}, 0.5 * c.radius * c.radius, n};
    auto one = TestFunction::constant_one();
    std::vector<double> dens;
    bool support = true;
    for (const auto& f : tr.frames()) {
        auto d = gaussian_density(f, kp, one);
        dens.push_back(d.value);
        support = support && d.support_ok;
        r.series["time"].push_back(f.time());
    }
    r.series["gaussian_density"] = dens;
    {
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,gaussian_density,residual,dissipative_term,discrepancy_term\n";
        for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
            auto m = monotonicity_residual(tr, kp, tr.times()[k], one);
            csv << m.time << ',' << m.density << ',' << m.residual << ',' << m.dissipative_term << ','
                << m.discrepancy_term << '\n';
        }
        r.tables.emplace_back("monotonicity.csv", csv.str());
    }
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < dens.size(); ++k)
        worst = std::max(worst, (dens[k + 1] - dens[k]) / (tr.sample_interval() * dens[k]));
    r.measurements["kernel_time"] = kp.s;
    r.checks.push_back(make_check("density_nonincreasing", claim_monotonicity, worst, "<=", 1e-3,
                                  support ? "" : "kernel is not negligible at the box boundary"));
    add_distance_check(r, max_distance_gradient(tr));
    add_records(r, tr, Region::whole_box());

    // residual of the formula at a fixed time, dt and dt/2
    std::vector<double> res;
    for (double f : {c.brakke_dt_factor, 0.5 * c.brakke_dt_factor}) {
        auto sh = evolve(u0, solver_config(c, 0, f, c.brakke_t_end, 40));
        auto m = monotonicity_residual(sh, kp, sh.times()[20], one);
        res.push_back(m.residual / std::abs(m.rate));
    }
    r.series["monotonicity_relative_residual"] = res;
    r.checks.push_back(make_check("monotonicity_refinement", claim_monotonicity, res[1] / res[0], "<=", 0.35));

    // density ratio at a point of the interface at the middle of the run
    double t0 = tr.times()[tr.size() / 2];
    double R = circle_radius(tr.frame(tr.size() / 2));
    Vec center{};
    center[g.vertical_axis()] = R;
    double rmax = std::min({0.25 * c.extent, std::sqrt(t0), std::sqrt(tr.end_time() - t0)});
    auto prof = density_ratio_profile(tr, center, t0, geometric_radii(2.0 * tr.epsilon(), rmax, 1.25), c.band);
    for (const auto& x : prof.ratios) {
        r.series["density_radius"].push_back(x.radius);
        r.series["density_ratio"].push_back(x.ratio);
    }
    r.checks.push_back(make_check("circle_density", claim_density, prof.min_ratio(), ">=", 1.0,
                                  prof.in_transition ? "" : "center outside the transition band"));
    r.snapshots.emplace_back("initial.field", tr.front());
    r.snapshots.emplace_back("final.field", tr.back());
    return r;
}

ScenarioReport no_cancellation(const ExperimentConfig& c) {
    ScenarioReport r;
    std::vector<double> defects;
    double dist = 0.0;
    for (std::size_t i = 0; i < c.epsilon.size(); ++i) {
        auto tr = evolve(initial_field(c, i), solver_config(c, i, c.dt_factor, c.t_end, c.frames));
        std::vector<TestFunction> family;
        double gap = 0.5 * c.extent - c.radius;
        for (int j = 1; j <= 5; ++j) family.push_back(TestFunction::radial_bump(Vec{}, c.radius + j * gap / 6.0));
        auto times = tr.times();
        defects.push_back(no_cancellation_check(tr, family, {times.front(), times[times.size() / 2], times.back()}));
        dist = std::max(dist, max_distance_gradient(tr));
        if (i == 0) {
            add_records(r, tr, Region::whole_box());
            r.snapshots.emplace_back("final.field", tr.back());
        }
    }
    r.series["defect"] = defects;
    r.checks.push_back(make_check("defect", claim_no_cancel, defects.front(), "<=", 0.03));
    if (defects.size() >= 2)
        r.checks.push_back(make_check("defect_trend", claim_no_cancel, defects[0] - defects[1], "<", 0.0,
                                      "defect(first eps) - defect(second eps)"));
    add_distance_check(r, dist);
    return r;
}

ExcessRow excess_row(const Trajectory& tr, const ExperimentConfig& c) {
    const auto& g = tr.grid();
    int n = g.dim() - 1;
    double R = c.cylinder_radius;
    Vec x0{};
    x0[0] = 0.125 * c.extent;
    Region region = Region::cylinder({x0, R * R, R});
    auto idx = region_indices(g, region);
    double norm = std::pow(R, -n - 2);
    ExcessRow row;
    row.epsilon = tr.epsilon();
    row.tilt = tilt_excess(tr, unit_axis(g.vertical_axis()), region);
    row.wrong_direction_tilt = tilt_excess(tr, unit_axis(0), region);
    row.willmore = willmore(tr, region);
    row.discrepancy = norm * integrate_in_time(tr, region, [&](const ScalarField& f) {
        auto x = discrepancy(f);
        double s = 0.0;
        for (auto i : idx) s += std::abs(x[i]);
        return s * g.cell_volume();
    });
    row.dirichlet = norm * integrate_in_time(tr, region, [&](const ScalarField& f) {
        auto d = derivatives(f);
        double s = 0.0;
        for (auto i : idx) s += f.epsilon() * d.gradient_norm2[i];
        return s * g.cell_volume();
    });
    return row;
}

Trajectory perturbed_run(const ExperimentConfig& c, std::size_t i) {
    return evolve(initial_field(c, i), solver_config(c, i, c.dt_factor, c.t_end, c.frames));
}

// Graph at heat_time extrapolated from runs at dt and dt/2, compared with the
// heat flow of h0. The plain comparison is dominated by the first order time error.
double extrapolated_heat_error(const ExperimentConfig& c, std::size_t i, std::span<const double> h0) {
    auto graph_at = [&](double dt_factor) {
        auto tr = evolve(initial_field(c, i), solver_config(c, i, dt_factor, c.heat_time, 1));
        return extract_graph(tr.back(), 0.0);
    };
    auto coarse = graph_at(c.dt_factor);
    auto g = graph_at(0.5 * c.dt_factor);
    for (std::size_t b = 0; b < g.base_size(); ++b) {
        g.heights[0][b] = 2.0 * g.heights[0][b] - coarse.heights[0][b];
        g.valid[0][b] = g.valid[0][b] && coarse.valid[0][b];
    }
    g.times = {c.heat_time};
    return heat_compare(g, h0, 0.0).relative_l2;
}

ScenarioReport excess_decay(const ExperimentConfig& c) {
    ScenarioReport r;
    std::size_t ref = reference_index(c);
    double R = c.cylinder_radius;
    Vec x0{};
    x0[0] = 0.125 * c.extent;
    ParabolicCylinder cyl{x0, R * R, R};
    std::vector<ExcessRow> rows;
    std::vector<double> heat, heat_extrapolated, ratios, constants, repulsion;
    bool any_applicable = false;
    double worst_ratio = 0.0, dist = 0.0;
    for (std::size_t i = 0; i < c.epsilon.size(); ++i) {
        auto tr = perturbed_run(c, i);
        dist = std::max(dist, max_distance_gradient(tr));
        rows.push_back(excess_row(tr, c));

        auto graph = extract_graph(tr, 0.0);
        Grid base = graph.base_grid();
        double a = c.amplitude_ratio * c.epsilon[i];
        std::vector<double> h0(base.size());
        for (std::size_t b = 0; b < base.size(); ++b)
            h0[b] = a * std::cos(2.0 * std::numbers::pi * c.mode * base.position(b)[0] / c.extent);
        heat.push_back(heat_compare(graph, h0, 0.0, c.heat_time).relative_l2);
        heat_extrapolated.push_back(extrapolated_heat_error(c, i, h0));

        auto dec = excess_decay_ratio(tr, c.theta, cyl, c.k1);
        ratios.push_back(dec.ratio);
        constants.push_back(dec.tilt_constant);
        repulsion.push_back(dec.layer_repulsion);
        r.series["tilt_distance"].push_back(dec.tilt_distance);
        r.series["height_unit"].push_back(dec.height_unit);
        r.series["height_fit"].push_back(dec.height_fit);
        if (i == ref) {
            r.measurements["fitted_normal_x"] = dec.plane.normal[0];
            r.measurements["fitted_normal_y"] = dec.plane.normal[1];
            r.measurements["fitted_offset"] = dec.plane.offset;
            r.measurements["theta"] = dec.theta;
        }
        if (dec.k1_condition) {
            any_applicable = true;
            worst_ratio = std::max(worst_ratio, dec.ratio);
        }

        if (i == ref) {
            r.tables.emplace_back("graph.csv", graph_csv(graph));
            r.measurements["decay_ratio"] = dec.ratio;
            r.measurements["height_unit"] = dec.height_unit;
            r.measurements["layer_repulsion"] = dec.layer_repulsion;
            r.measurements["k1"] = dec.k1;
            add_records(r, tr, Region::cylinder(cyl));
            r.snapshots.emplace_back("initial.field", tr.front());
            r.snapshots.emplace_back("final.field", tr.back());
        }
    }
    {
        // Steeper run at the finest epsilon; the cylinder spans crest to steepest
        // slope so the tilt varies across cells.
        std::size_t fine = static_cast<std::size_t>(
            std::min_element(c.epsilon.begin(), c.epsilon.end()) - c.epsilon.begin());
        ExperimentConfig steep = c;
        steep.amplitude_ratio = c.weak_l1_amplitude / c.epsilon[fine];
        auto str = evolve(initial_field(steep, fine), solver_config(c, fine, c.dt_factor, 8.0 * R * R, c.frames));
        dist = std::max(dist, max_distance_gradient(str));
        ParabolicCylinder wide{x0, 4.0 * R * R, R};
        auto p = partition_good_bad(str, c.thresholds.front(), c.band, wide);
        std::vector<double> weak;
        for (double l : c.thresholds) {
            auto q = rethreshold(p, l);
            weak.push_back(weak_l1_ratio(str, q));
            r.series["bad_cells"].push_back(static_cast<double>(q.count(CellState::bad)));
        }
        r.series["weak_l1_ratio"] = weak;
        r.series["thresholds"] = c.thresholds;
        r.measurements["good_set_lipschitz"] = good_set_lipschitz(str, p, 0.0);
        r.checks.push_back(make_check("weak_l1_stability", claim_weak_l1, spread(weak), "<=", 2.0,
                                      "max/min of bad-set energy * l / tilt excess over l"));
    }
    std::vector<double> tilt, disc, will, control;
    for (const auto& row : rows) {
        tilt.push_back(row.tilt);
        disc.push_back(row.discrepancy);
        will.push_back(row.willmore);
        control.push_back(row.wrong_direction_tilt / row.dirichlet);
    }
    r.series["epsilon"] = c.epsilon;
    r.series["tilt_excess"] = tilt;
    r.series["discrepancy"] = disc;
    r.series["willmore"] = will;
    r.series["wrong_direction_fraction"] = control;
    r.series["heat_relative_l2"] = heat;
    r.series["heat_extrapolated"] = heat_extrapolated;
    r.series["decay_ratio"] = ratios;
    r.series["tilt_constant"] = constants;
    r.series["layer_repulsion"] = repulsion;

    if (rows.size() >= 2) {
        r.checks.push_back(make_check("tilt_decreases", claim_excess, max_step_ratio(tilt), "<", 1.0,
                                      "largest ratio between consecutive sweep entries"));
        r.checks.push_back(make_check("discrepancy_decreases", claim_excess, max_step_ratio(disc), "<", 1.0));
        r.checks.push_back(make_check("willmore_decreases", claim_excess, max_step_ratio(will), "<", 1.0));
        r.checks.push_back(make_check("heat_trend", claim_heat, max_step_ratio(heat_extrapolated), "<", 1.0,
                                      "errors of the graphs extrapolated in dt"));
    }
    r.checks.push_back(make_check("tilted_frame_control", claim_excess, *std::min_element(control.begin(), control.end()),
                                  ">=", 0.9, "excess against e_1 over the Dirichlet energy"));
    r.checks.push_back(make_check("heat_reference", claim_heat, heat[ref], "<=", 0.05));
    if (any_applicable)
        r.checks.push_back(make_check("decay_ratio", claim_decay, worst_ratio, "<=", 0.5 * c.theta));
    else
        r.checks.push_back(not_applicable("decay_ratio", claim_decay, *std::max_element(repulsion.begin(), repulsion.end()),
                                          ">=", c.k1, "layer repulsion H/eps^2 below K1 for every entry"));
    r.checks.push_back(make_check("tilt_constant_stability", claim_decay, spread(constants), "<=", 2.0));
    add_distance_check(r, dist);
    return r;
}

ScenarioReport inequality_ratios(const ExperimentConfig& c) {
    ScenarioReport r;
    std::vector<std::pair<std::size_t, std::size_t>> combos{{0, 0}};
    if (c.points.size() >= 2) combos.push_back({0, 1});
    if (c.epsilon.size() >= 2) combos.push_back({1, c.points.size() >= 2 ? 1 : 0});
    std::vector<double> ct, st, cc, sc;
    double dist = 0.0;
    for (auto [ei, pi] : combos) {
        double eps = c.epsilon[ei];
        Grid g(c.dim, c.points[std::min(pi, c.points.size() - 1)], c.extent);
        int v = g.vertical_axis();
        auto profile = tilted_profile(c.slope, c.extent, c.extent / 16.0);
        auto tilted = prepare_interface(g, eps, graph_distance(g, profile));
        auto circle = prepare_interface(g, eps, sphere_distance(Vec{}, c.radius));
        dist = std::max({dist, aclab::max_distance_gradient(tilted), aclab::max_distance_gradient(circle)});

        Hyperplane flat{unit_axis(v), 0.0};
        ct.push_back(caccioppoli_ratio(tilted, flat, Vec{}, 0.1).ratio);
        // midway along the rising affine piece
        Vec mid{};
        mid[0] = 0.125 * c.extent;
        mid[v] = profile.f(mid[0]);
        auto sob = sobolev_defect(tilted, unit_axis(v), mid, 0.1, c.band);
        st.push_back(sob.ratio);
        r.series["sobolev_tilted_difference"].push_back(sob.energy_difference);
        r.series["sobolev_tilted_bundle"].push_back(sob.bundle);

        Vec side{};
        side[0] = c.radius;
        cc.push_back(caccioppoli_ratio(circle, Hyperplane{unit_axis(0), 0.0}, side, 0.1).ratio);
        auto sob_circle = sobolev_defect(circle, unit_axis(0), side, 0.12, c.band);
        sc.push_back(sob_circle.ratio);
        r.series["sobolev_circle_difference"].push_back(sob_circle.energy_difference);
        r.series["sobolev_circle_bundle"].push_back(sob_circle.bundle);
    }
    r.series["caccioppoli_tilted"] = ct;
    r.series["sobolev_tilted"] = st;
    r.series["caccioppoli_circle"] = cc;
    r.series["sobolev_circle"] = sc;
    r.checks.push_back(make_check("caccioppoli_tilted", claim_inequalities, spread(ct), "<=", 2.0));
    r.checks.push_back(make_check("sobolev_tilted", claim_inequalities, spread(st), "<=", 2.0));
    r.checks.push_back(make_check("caccioppoli_circle", claim_inequalities, spread(cc), "<=", 2.0));
    r.checks.push_back(make_check("sobolev_circle", claim_inequalities, spread(sc), "<=", 2.0));

    auto stress = stress_divergence_study(c.seed);
    r.series["stress_defect"] = stress;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < stress.size(); ++i) worst = std::min(worst, stress[i] / stress[i + 1]);
    r.checks.push_back(make_check("stress_refinement", claim_stress, worst, ">=", 4.0,
                                  "smallest defect reduction per grid doubling"));
    add_distance_check(r, dist);
    return r;
}

}  // namespace

std::vector<ExcessRow> excess_convergence_sweep(const ExperimentConfig& config) {
    config.validate();
    std::vector<ExcessRow> rows;
    for (std::size_t i = 0; i < config.epsilon.size(); ++i) rows.push_back(excess_row(perturbed_run(config, i), config));
    return rows;
}

ScenarioReport run_scenario(const ExperimentConfig& config) {
    config.validate();
    ScenarioReport r;
    switch (config.scenario) {
        case Scenario::standing_wave: r = standing_wave(config); break;
        case Scenario::shrinking_circle: r = shrinking_circle(config); break;
        case Scenario::excess_decay: r = excess_decay(config); break;
        case Scenario::no_cancellation: r = no_cancellation(config); break;
        case Scenario::monotonicity_sweep: r = monotonicity_sweep(config); break;
        case Scenario::inequality_ratios: r = inequality_ratios(config); break;
    }
    r.scenario = config.scenario;
    r.config = config;
    return r;
}

}  // namespace aclab
