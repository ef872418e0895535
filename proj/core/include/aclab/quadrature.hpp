#pragma once

#include <functional>
#include <span>
#include <vector>

#include "aclab/field.hpp"

namespace aclab {

// Lattice points with |x - center| <= radius. Throws if the ball leaves the box.
std::vector<std::size_t> ball_indices(const Grid& grid, const Vec& center, double radius);

// Lattice points of the region's spatial slice (every point for the whole box).
std::vector<std::size_t> region_indices(const Grid& grid, const Region& region);

// Weights w with sum_k w_k f(t_k) equal to the integral over [lo, hi] of the
// piecewise-linear interpolant of f. Times must be increasing; [lo, hi] must lie
// inside [t_0, t_last] up to rounding.
std::vector<double> time_weights(std::span<const double> times, double lo, double hi);

// Time weights for the region's window, [t0 - r^2, t0 + r^2] or the full span.
std::vector<double> region_time_weights(const Trajectory& tr, const Region& region);

// Riemann sum h^dim sum f over the region's spatial slice.
double integrate(const ScalarField& density, const Region& region);
double integrate(const ScalarField& density, std::span<const std::size_t> indices);

// Space-time integral of a density trajectory.
double integrate(const Trajectory& densities, const Region& region);

// Space-time integral where the spatial integral of each frame is supplied by
// the caller; only frames with nonzero time weight are visited.
double integrate_in_time(const Trajectory& tr, const Region& region,
                         const std::function<double(const ScalarField& frame)>& spatial_integral);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace aclab
