#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aclab/field.hpp"

namespace aclab {

// z = eps artanh(u), u clamped to +-(1 - 1e-12)
ScalarField distance_function(const ScalarField& u);
// max eps|grad u| / (1 - u^2) over {|u| <= band}; equals max |grad z| there.
double max_distance_gradient(const ScalarField& u, double band = 0.999);

// Heights h^s(x^, t) of the level set {u = s} over the base lattice x^ = (x_1..x_n).
struct LevelSetGraph {
    double level = 0.0;
    int base_dim = 0;
    int points = 0;  // per base axis, same as the field grid
    double extent = 0.0;
    double window = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> heights;  // [frame][base point]
    std::vector<std::vector<char>> valid;      // [frame][base point]

    std::size_t base_size() const;
    Vec base_position(std::size_t b) const;
    double validity_fraction() const;
    Grid base_grid() const;  // needs base_dim >= 1
};

// Per column: bracket the sign changes of u - s for |x_{n+1}| <= window
// (default L/4), refine on the column's trigonometric interpolant by bisection
// then Newton until |u(h) - s| <= 1e-12. Columns without exactly one crossing,
// or with a degenerate slope, are invalid. Throws if every column is invalid.
LevelSetGraph extract_graph(const Trajectory& tr, double s, std::optional<double> window = std::nullopt);
LevelSetGraph extract_graph(const ScalarField& u, double s, std::optional<double> window = std::nullopt);

// One row per frame and base point: t, x_1..x_n, h, valid.
std::string graph_csv(const LevelSetGraph& graph);

// Every crossing of u = s along the vertical column over base point b, refined
// on the column's trigonometric interpolant.
std::vector<double> column_crossings(const ScalarField& u, std::size_t base_point, double s);

// Defects of d_{n+1}u = 1/h_s, d_i u = -h_i/h_s, d_t u = -h_t/h_s at valid
// points, with h_s from graphs at s +- ds. Each defect is divided by |d_{n+1}u|.
struct DerivativeRelations {
    double vertical = 0.0;
    double horizontal = 0.0;
    double temporal = 0.0;  // 0 when there are fewer than three frames
    double max() const;
    std::size_t points_checked = 0;
};

DerivativeRelations graph_derivative_relations(const Trajectory& tr, double s, double ds = 1e-3);
DerivativeRelations graph_derivative_relations(const ScalarField& u, double s, double ds = 1e-3);

// Function on a periodic n-dimensional base lattice sampled at uniform times.
struct BaseFunction {
    Grid base;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // [frame][base point]
};

// sup over radii of r^{-n-2} int_{t-r^2}^{t+r^2} int_{B_r(x^)} f. Balls are
// periodic; radii whose time window leaves the data are skipped.
double parabolic_maximal(const BaseFunction& f, std::size_t point, std::size_t frame, std::span<const double> radii);

// r_max 2^{-k} down to the last radius >= 2 h.
std::vector<double> dyadic_radii(double r_max, double spacing);

enum class CellState : char { outside = 0, good = 1, bad = 2 };

struct GoodBadPartition {
    double l = 0.0;
    double b = 0.0;
    ParabolicCylinder cylinder;
    std::vector<std::size_t> cells;            // lattice points of B_R(x0)
    std::vector<std::size_t> frames;           // frames with |t - t0| <= R^2
    std::vector<std::vector<CellState>> state; // [frame slot][cell slot]
    std::vector<std::vector<double>> maximal;  // maximal function value per cell, same layout
    std::size_t count(CellState s) const;
};

// Full space-time maximal function of (1 - nu_{n+1}^2) eps|grad u|^2 over
// dyadic radii up to R, thresholded at l on {|u| < 1 - b} inside P_R.
GoodBadPartition partition_good_bad(const Trajectory& tr, double l, double b, const ParabolicCylinder& cyl);
// Same thresholds from an already computed partition at another l.
GoodBadPartition rethreshold(const GoodBadPartition& p, double l);

// [int_bad eps|grad u|^2] l / [int_{P_2R} (1 - nu_{n+1}^2) eps|grad u|^2]
double weak_l1_ratio(const Trajectory& tr, const GoodBadPartition& p);

// Largest |grad h^s| over base points whose graph point falls in a good cell.
double good_set_lipschitz(const Trajectory& tr, const GoodBadPartition& p, double s);

struct HeatComparison {
    double relative_l2 = 0.0;
    std::vector<double> frame_times;
    std::vector<double> frame_errors;
};

// Mean-free graph against e^{(t - t0) Lap} (h0 - mean h0) on the periodic base,
// over all frames or only the frame at `at_time`.
HeatComparison heat_compare(const LevelSetGraph& graph, std::span<const double> h0, double t0,
                            std::optional<double> at_time = std::nullopt);

struct ExcessDecayReport {
    Hyperplane plane;  // fitted on P_{theta R}, coordinates relative to the center
    double theta = 0.0;
    double ratio = 0.0;             // H_fit(P_theta R) / H_{e_{n+1}}(P_R), both normalized
    double height_unit = 0.0;       // H(P_R) with respect to {x_{n+1} = 0}
    double height_fit = 0.0;        // H(P_theta R) with respect to the fitted plane
    double layer_repulsion = 0.0;   // H(P_R) / (eps / R)^2
    double tilt_distance = 0.0;     // |e - e_{n+1}|
    double tilt_constant = 0.0;     // tilt_distance / sqrt(H(P_R))
    double k1 = 10.0;
    bool k1_condition = false;      // layer_repulsion >= k1
    bool decays = false;            // ratio <= theta / 2
};

ExcessDecayReport excess_decay_ratio(const Trajectory& tr, double theta, const ParabolicCylinder& cyl,
                                     double k1 = 10.0);

}  // namespace aclab
