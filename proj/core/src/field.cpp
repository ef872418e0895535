#include "aclab/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace aclab {

double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec normalized(const Vec& a) {
    double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    return {a[0] / n, a[1] / n, a[2] / n};
}

Vec unit_axis(int axis) {
    if (axis < 0 || axis >= max_dim) throw std::out_of_range("axis out of range");
    Vec e{};
    e[axis] = 1.0;
    return e;
}

Grid::Grid(int dim, int points_per_axis, double extent)
    : dim_(dim), points_(points_per_axis), extent_(extent), size_(1) {
    if (dim < 1 || dim > max_dim) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (points_per_axis < 8 || points_per_axis % 2 != 0)
        throw std::invalid_argument("points_per_axis must be even and >= 8");
    if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("extent must be positive");
    for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(points_per_axis);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::array<int, max_dim> Grid::unravel(std::size_t flat) const {
    std::array<int, max_dim> idx{};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % points_);
        flat /= points_;
    }
    return idx;
}

std::size_t Grid::ravel(const std::array<int, max_dim>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a) {
        int i = ((idx[a] % points_) + points_) % points_;
        flat = flat * points_ + static_cast<std::size_t>(i);
    }
    return flat;
}

Vec Grid::position(std::size_t flat) const {
    auto idx = unravel(flat);
    Vec x{};
    for (int a = 0; a < dim_; ++a) x[a] = coordinate(idx[a]);
    return x;
}

ScalarField::ScalarField(Grid grid, std::vector<double> values, double epsilon, double time)
    : grid_(grid), values_(std::move(values)), epsilon_(epsilon), time_(time) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("value count does not match grid");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
    if (!std::isfinite(time)) throw std::invalid_argument("time must be finite");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("field contains non-finite values");
}

ScalarField ScalarField::filled(const Grid& grid, double value, double epsilon, double time) {
    return ScalarField(grid, std::vector<double>(grid.size(), value), epsilon, time);
}

ScalarField ScalarField::sample(const Grid& grid, double epsilon, const std::function<double(const Vec&)>& f,
                                double time) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.position(i));
    return ScalarField(grid, std::move(v), epsilon, time);
}

ScalarField ScalarField::with_values(std::vector<double> values) const {
    return ScalarField(grid_, std::move(values), epsilon_, time_);
}

ScalarField ScalarField::at_time(double time) const { return ScalarField(grid_, values_, epsilon_, time); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Trajectory::Trajectory(std::vector<ScalarField> frames, double sample_interval)
    : frames_(std::move(frames)), sample_interval_(sample_interval) {
    if (frames_.empty()) throw std::invalid_argument("trajectory needs at least one frame");
    if (frames_.size() > 1 && !(sample_interval > 0.0))
        throw std::invalid_argument("sample interval must be positive");
    const auto& g = frames_.front().grid();
    double eps = frames_.front().epsilon();
    double t0 = frames_.front().time();
    for (std::size_t k = 0; k < frames_.size(); ++k) {
        const auto& f = frames_[k];
        if (!(f.grid() == g)) throw std::invalid_argument("trajectory frames live on different grids");
        if (f.epsilon() != eps) throw std::invalid_argument("trajectory frames have different epsilon");
        double expect = t0 + k * sample_interval;
        if (std::abs(f.time() - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw std::invalid_argument("trajectory frames are not uniformly sampled");
    }
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t(frames_.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = frames_[k].time();
    return t;
}

std::size_t Trajectory::index_at(double t) const {
    if (frames_.size() == 1) {
        if (std::abs(t - start_time()) <= 1e-12 * std::max(1.0, std::abs(t))) return 0;
        throw std::out_of_range("no frame at requested time");
    }
    double k = (t - start_time()) / sample_interval_;
    long r = std::lround(k);
    if (r < 0 || r >= static_cast<long>(frames_.size()) || std::abs(k - r) > 1e-6)
        throw std::out_of_range("no frame at requested time");
    return static_cast<std::size_t>(r);
}

Region Region::cylinder(const ParabolicCylinder& c) {
    if (!(c.radius > 0.0) || !std::isfinite(c.radius)) throw std::invalid_argument("cylinder radius must be positive");
    Region r;
    r.whole_ = false;
    r.cyl_ = c;
    return r;
}

const ParabolicCylinder& Region::cylinder() const {
    if (whole_) throw std::logic_error("whole-box region has no cylinder");
    return cyl_;
}

std::string Region::describe() const {
    if (whole_) return "box";
    std::ostringstream os;
    os << "P(r=" << cyl_.radius << ";x=" << cyl_.center[0] << "," << cyl_.center[1] << "," << cyl_.center[2]
       << ";t=" << cyl_.center_time << ")";
    return os.str();
}

Hyperplane Hyperplane::horizontal(const Grid& grid, double offset) {
    return Hyperplane{unit_axis(grid.vertical_axis()), offset};
}

void validate_hyperplane(const Hyperplane& plane, int dim) {
    for (int a = dim; a < max_dim; ++a)
        if (plane.normal[a] != 0.0) throw std::invalid_argument("plane normal has components past the grid dimension");
    if (std::abs(norm(plane.normal) - 1.0) > 1e-9) throw std::invalid_argument("plane normal must be a unit vector");
}

}  // namespace aclab
