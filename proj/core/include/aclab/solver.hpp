#pragma once

#include <functional>
#include <string>

#include "aclab/field.hpp"

namespace aclab {

enum class Scheme { semi_implicit, explicit_rk2 };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct SolverConfig {
    double dt = 0.0;
    Scheme scheme = Scheme::semi_implicit;
    double t_end = 0.0;
    int sample_every = 1;  // steps between stored frames
};

// Largest time step the scheme accepts on this grid.
double max_stable_dt(Scheme scheme, const Grid& grid, double epsilon);
void validate(const SolverConfig& cfg, const Grid& grid, double epsilon);

// Lap u - W'(u) / eps^2, which is d_t u along the flow.
ScalarField ac_residual(const ScalarField& u);

ScalarField step(const ScalarField& u, const SolverConfig& cfg);

using FrameObserver = std::function<void(const ScalarField&)>;

// Calls on_frame with the initial field and every sample_every steps after it.
// t_end must be a whole number of steps.
void evolve(const ScalarField& u0, const SolverConfig& cfg, const FrameObserver& on_frame);
Trajectory evolve(const ScalarField& u0, const SolverConfig& cfg);

// Signed distance to an interface, positive on the u = +1 side.
using SignedDistance = std::function<double(const Vec&)>;

// u = tanh(d / eps) after checking |grad d| <= 1 in the transition band.
ScalarField prepare_interface(const Grid& grid, double epsilon, const SignedDistance& d, double time = 0.0);

}  // namespace aclab
