#pragma once

#include <functional>

#include "aclab/field.hpp"
#include "aclab/solver.hpp"

namespace aclab {

// Height profile x_{n+1} = f(x_1), periodic in x_1 with the box period and
// constant along the other horizontal axes.
struct GraphProfile {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
    double curvature_bound = 0.0;  // sup |f''|
};

GraphProfile cosine_profile(double amplitude, double wavelength);
// Slope `slope` on |x_1| < L/4 - O(width), slope -slope on the other half,
// joined smoothly over `width`. Exactly affine away from the joins.
GraphProfile tilted_profile(double slope, double period, double width);

// Flat interface at x_{n+1} = offset with the periodic mirror at offset + L/2.
SignedDistance slab_distance(const Grid& grid, double offset = 0.0);
// Positive inside the sphere.
SignedDistance sphere_distance(const Vec& center, double radius);
// Graph interface above a profile with the mirror at x_{n+1} = L/2. Needs dim >= 2.
SignedDistance graph_distance(const Grid& grid, GraphProfile profile);

}  // namespace aclab
