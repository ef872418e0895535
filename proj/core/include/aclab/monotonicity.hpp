#pragma once

#include <vector>

#include "aclab/field.hpp"
#include "aclab/test_function.hpp"

namespace aclab {

// Center (y, s) of the backward heat kernel of interface dimension n.
struct KernelPoint {
    Vec y{};
    double s = 0.0;
    int n = 1;
};

// (4 pi (s - t))^{-n/2} exp(-|x - y|^2 / (4 (s - t))), t < s
double huisken_kernel(const KernelPoint& kp, const Vec& x, double t);

struct GaussianDensity {
    double value = 0.0;
    // false when neither the kernel nor rho is negligible at the box boundary
    bool support_ok = true;
};

// int Phi rho dmu_t for the frame at time t.
GaussianDensity gaussian_density(const ScalarField& u, const KernelPoint& kp, const TestFunction& rho);
GaussianDensity gaussian_density(const Trajectory& tr, const KernelPoint& kp, double t, const TestFunction& rho);

struct MonotonicityReport {
    double time = 0.0;
    double density = 0.0;
    double rate = 0.0;              // centered difference of the density
    double dissipative_term = 0.0;  // -int eps rho Phi (-r + grad u.(x-y)/(2(s-t)))^2
    double discrepancy_term = 0.0;  // int rho Phi xi / (2(s-t))
    double rho_time_term = 0.0;     // int Phi d_t rho dmu
    double hessian_term = 0.0;      // int T_ij Phi d_ij rho
    double rhs = 0.0;
    double residual = 0.0;          // |rate - rhs|
    bool support_ok = true;
};

// t must be a frame with neighbours on both sides and t < s.
MonotonicityReport monotonicity_residual(const Trajectory& tr, const KernelPoint& kp, double t,
                                         const TestFunction& rho);

// [int_{B_{r/2}} x_{n+1}^2 Phi_{x0,t0} dmu_t] / [r^{-n-2} int_{t0-r^2}^{t0} int_{B_r} x_{n+1}^2 dmu],
// coordinates relative to x0. Returns 0 when the denominator vanishes.
double l2_linfty_ratio(const Trajectory& tr, const ParabolicCylinder& cyl, double t);
// Largest ratio over the frames in [t0 - r^2, t0).
double l2_linfty_ratio(const Trajectory& tr, const ParabolicCylinder& cyl);

}  // namespace aclab
