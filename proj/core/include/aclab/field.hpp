#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace aclab {

constexpr int max_dim = 3;

// Points and directions. Components past the grid dimension are zero.
using Vec = std::array<double, max_dim>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec normalized(const Vec& a);
Vec unit_axis(int axis);

// Periodic lattice on [-L/2, L/2)^dim, x_i = -L/2 + i h. The origin is a lattice
// point when N is even. The last axis is the vertical direction x_{n+1}.
class Grid {
public:
    Grid(int dim, int points_per_axis, double extent);

    int dim() const { return dim_; }
    int points() const { return points_; }
    double extent() const { return extent_; }
    double spacing() const { return extent_ / points_; }
    double cell_volume() const;
    std::size_t size() const { return size_; }
    int vertical_axis() const { return dim_ - 1; }

    double coordinate(int index) const { return -0.5 * extent_ + index * spacing(); }
    std::array<int, max_dim> unravel(std::size_t flat) const;
    std::size_t ravel(const std::array<int, max_dim>& idx) const;
    Vec position(std::size_t flat) const;

    bool operator==(const Grid& other) const = default;

private:
    int dim_;
    int points_;
    double extent_;
    std::size_t size_;
};

// W(u) = (1 - u^2)^2 / 2
struct DoubleWell {
    static constexpr double alpha = 4.0 / 3.0;  // int sech^4
    static double value(double u) { double s = 1.0 - u * u; return 0.5 * s * s; }
    static double derivative(double u) { return -2.0 * u * (1.0 - u * u); }
    static double second_derivative(double u) { return 6.0 * u * u - 2.0; }
};

// Immutable lattice function with its epsilon and time stamp.
class ScalarField {
public:
    ScalarField(Grid grid, std::vector<double> values, double epsilon, double time = 0.0);

    static ScalarField filled(const Grid& grid, double value, double epsilon, double time = 0.0);
    static ScalarField sample(const Grid& grid, double epsilon, const std::function<double(const Vec&)>& f,
                              double time = 0.0);

    const Grid& grid() const { return grid_; }
    double epsilon() const { return epsilon_; }
    double time() const { return time_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    // Same grid, epsilon and time, new values.
    ScalarField with_values(std::vector<double> values) const;
    ScalarField at_time(double time) const;

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> values_;
    double epsilon_;
    double time_;
};

// Frames sampled at a uniform interval.
class Trajectory {
public:
    Trajectory(std::vector<ScalarField> frames, double sample_interval);

    std::size_t size() const { return frames_.size(); }
    const ScalarField& frame(std::size_t i) const { return frames_.at(i); }
    const std::vector<ScalarField>& frames() const { return frames_; }
    const ScalarField& front() const { return frames_.front(); }
    const ScalarField& back() const { return frames_.back(); }
    double sample_interval() const { return sample_interval_; }
    const Grid& grid() const { return frames_.front().grid(); }
    double epsilon() const { return frames_.front().epsilon(); }
    double start_time() const { return frames_.front().time(); }
    double end_time() const { return frames_.back().time(); }
    std::vector<double> times() const;

    // Index of the frame at time t, or throws if no frame is there.
    std::size_t index_at(double t) const;

private:
    std::vector<ScalarField> frames_;
    double sample_interval_;
};

// P_r(x0, t0) = [t0 - r^2, t0 + r^2] x B_r(x0)
struct ParabolicCylinder {
    Vec center{};
    double center_time = 0.0;
    double radius = 1.0;
};

class Region {
public:
    static Region whole_box() { return Region(); }
    static Region cylinder(const ParabolicCylinder& c);

    bool is_whole_box() const { return whole_; }
    const ParabolicCylinder& cylinder() const;
    // Center used for coordinates (origin for the whole box).
    Vec center() const { return whole_ ? Vec{} : cyl_.center; }
    // r for the r^{-n} style normalizations (1 for the whole box).
    double scale() const { return whole_ ? 1.0 : cyl_.radius; }
    std::string describe() const;

private:
    Region() = default;
    bool whole_ = true;
    ParabolicCylinder cyl_{};
};

// {x : e.x = lambda}
struct Hyperplane {
    Vec normal{0.0, 0.0, 0.0};
    double offset = 0.0;

    static Hyperplane horizontal(const Grid& grid, double offset = 0.0);
};

// Checks |normal| = 1 within tolerance and that no component lies past dim.
void validate_hyperplane(const Hyperplane& plane, int dim);

}  // namespace aclab
