#include "aclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aclab {

std::vector<std::size_t> ball_indices(const Grid& grid, const Vec& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    double half = 0.5 * grid.extent();
    double tol = 1e-12 * grid.extent();
    int d = grid.dim();
    for (int a = 0; a < d; ++a)
        if (center[a] - radius < -half - tol || center[a] + radius > half + tol)
            throw std::invalid_argument("region ball leaves the computational box");

    std::array<int, max_dim> lo{}, hi{};
    double h = grid.spacing();
    for (int a = 0; a < d; ++a) {
        lo[a] = std::max(0, static_cast<int>(std::floor((center[a] - radius + half) / h)));
        hi[a] = std::min(grid.points() - 1, static_cast<int>(std::ceil((center[a] + radius + half) / h)));
    }
    std::vector<std::size_t> out;
    double r2 = radius * radius * (1.0 + 1e-12);
    std::array<int, max_dim> idx{};
    for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0]) {
        for (idx[1] = d > 1 ? lo[1] : 0; idx[1] <= (d > 1 ? hi[1] : 0); ++idx[1]) {
            for (idx[2] = d > 2 ? lo[2] : 0; idx[2] <= (d > 2 ? hi[2] : 0); ++idx[2]) {
                double s = 0.0;
                for (int a = 0; a < d; ++a) {
                    double dx = grid.coordinate(idx[a]) - center[a];
                    s += dx * dx;
                }
                if (s <= r2) out.push_back(grid.ravel(idx));
            }
        }
    }
    return out;
}

std::vector<std::size_t> region_indices(const Grid& grid, const Region& region) {
    if (region.is_whole_box()) {
        std::vector<std::size_t> all(grid.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
    }
    const auto& c = region.cylinder();
    return ball_indices(grid, c.center, c.radius);
}

std::vector<double> time_weights(std::span<const double> times, double lo, double hi) {
    std::size_t n = times.size();
    if (n == 0) throw std::invalid_argument("no frames to integrate over");
    if (hi < lo) throw std::invalid_argument("time window is reversed");
    double span = times.back() - times.front();
    double tol = 1e-9 * std::max({1.0, std::abs(times.front()), std::abs(times.back())}) + 1e-9 * span;
    if (lo < times.front() - tol || hi > times.back() + tol)
        throw std::invalid_argument("time window extends beyond the trajectory");
    lo = std::max(lo, times.front());
    hi = std::min(hi, times.back());
    std::vector<double> w(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double t0 = times[k], t1 = times[k + 1];
        double a = std::max(lo, t0), b = std::min(hi, t1);
        if (b <= a) continue;
        double dt = t1 - t0;
        w[k] += ((t1 - a) * (t1 - a) - (t1 - b) * (t1 - b)) / (2.0 * dt);
        w[k + 1] += ((b - t0) * (b - t0) - (a - t0) * (a - t0)) / (2.0 * dt);
    }
    return w;
}

std::vector<double> region_time_weights(const Trajectory& tr, const Region& region) {
    auto t = tr.times();
    if (region.is_whole_box()) return time_weights(t, t.front(), t.back());
    const auto& c = region.cylinder();
    double r2 = c.radius * c.radius;
    return time_weights(t, c.center_time - r2, c.center_time + r2);
}

double integrate(const ScalarField& density, std::span<const std::size_t> indices) {
    double s = 0.0;
    for (auto i : indices) s += density[i];
    return s * density.grid().cell_volume();
}

double integrate(const ScalarField& density, const Region& region) {
    if (region.is_whole_box()) {
        double s = 0.0;
        for (double v : density.values()) s += v;
        return s * density.grid().cell_volume();
    }
    auto idx = region_indices(density.grid(), region);
    return integrate(density, idx);
}

double integrate_in_time(const Trajectory& tr, const Region& region,
                         const std::function<double(const ScalarField& frame)>& spatial_integral) {
    auto w = region_time_weights(tr, region);
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0) s += w[k] * spatial_integral(tr.frame(k));
    return s;
}

double integrate(const Trajectory& densities, const Region& region) {
    auto idx = region_indices(densities.grid(), region);
    return integrate_in_time(densities, region, [&](const ScalarField& f) { return integrate(f, idx); });
}

double unit_ball_volume(int n) {
    if (n < 0) throw std::invalid_argument("negative dimension");
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace aclab
