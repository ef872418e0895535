#pragma once

#include <string>
#include <vector>

#include "aclab/field.hpp"
#include "aclab/test_function.hpp"

namespace aclab {

// Gradient, |grad u|^2 and the Allen-Cahn residual Lap u - W'(u)/eps^2 of a
// field, computed from a single forward transform.
struct FieldDerivatives {
    std::vector<std::vector<double>> gradient;  // [axis][point]
    std::vector<double> gradient_norm2;
    std::vector<double> residual;
    double gradient_floor = 0.0;  // 1e-8 max |grad u|
};

FieldDerivatives derivatives(const ScalarField& u);

ScalarField energy_density(const ScalarField& u);
ScalarField discrepancy(const ScalarField& u);

// mu(B_r) for one time slice, mu(P_r) for a trajectory.
double energy(const ScalarField& u, const Region& region);
double energy(const Trajectory& tr, const Region& region);

// r^{-n} int (1 - (nu.e)^2) eps|grad u|^2, or r^{-n-2} over space-time.
double tilt_excess(const ScalarField& u, const Vec& e, const Region& region);
double tilt_excess(const Trajectory& tr, const Vec& e, const Region& region);

// r^{-n-2} int |e.(x - x0) - lambda|^2 eps|grad u|^2, or r^{-n-4} over space-time.
double height_excess(const ScalarField& u, const Hyperplane& plane, const Region& region);
double height_excess(const Trajectory& tr, const Hyperplane& plane, const Region& region);

// int eps (Lap u - W'/eps^2)^2, no r power.
double willmore(const ScalarField& u, const Region& region);
double willmore(const Trajectory& tr, const Region& region);

struct DiagnosticsRecord {
    double time = 0.0;
    std::string region;
    double energy = 0.0;
    double tilt_excess = 0.0;
    double height_excess = 0.0;
    double willmore = 0.0;
    double discrepancy_l1 = 0.0;
    double discrepancy_max = 0.0;
};

DiagnosticsRecord diagnose(const ScalarField& u, const Region& region);
// One record per frame inside the region's time window.
std::vector<DiagnosticsRecord> diagnose(const Trajectory& tr, const Region& region);

std::string diagnostics_csv_header();
std::string to_csv_row(const DiagnosticsRecord& r);

// T_ij = eps d_i u d_j u - e delta_ij
struct StressTensor {
    int dim = 0;
    std::vector<std::vector<double>> components;  // [i * dim + j][point]
    const std::vector<double>& operator()(int i, int j) const { return components[i * dim + j]; }
};

StressTensor stress_energy(const ScalarField& u);
// max_{j, x} |d_i T_ij - eps (d_t u) d_j u| with d_t u from ac_residual.
double divergence_defect(const ScalarField& u);

struct BrakkeResidual {
    double time = 0.0;
    double measured_rate = 0.0;  // centered difference of int phi dmu
    double rhs_direct = 0.0;     // -eps phi r^2 - eps <grad phi, grad u> r
    double rhs_tensor = 0.0;     // -eps phi r^2 + T : Hess phi
    double dissipation = 0.0;    // int eps phi r^2
    double residual_direct = 0.0;
    double residual_tensor = 0.0;
};

// t must be a frame with a neighbour on each side.
BrakkeResidual brakke_residual(const Trajectory& tr, const TestFunction& phi, double t);

// Energy dissipation check between two frames: mu(t2) - mu(t1) + int eps r^2.
struct DissipationDefect {
    double energy_change = 0.0;
    double dissipation = 0.0;
    double defect = 0.0;           // |energy_change + dissipation|
    double relative_defect = 0.0;  // defect / |energy_change|
};
DissipationDefect energy_dissipation_defect(const Trajectory& tr);

// Caccioppoli inequality evaluated on B_rho(center) rescaled to the unit ball,
// with x_{n+1} = e.(x - center) and x^ = the component orthogonal to e.
struct CaccioppoliReport {
    double tilt_term = 0.0;         // int phi^2 psi^2 (1 - nu_e^2) eps|grad u|^2
    double discrepancy_term = 0.0;  // int phi^2 psi^2 |xi|
    double height_term = 0.0;       // int phi^2 psi^2 x^2 eps|grad u|^2
    double willmore_term = 0.0;     // int phi^2 psi^2 eps r^2
    double mixed_term = 0.0;        // sqrt(height_term * willmore_term)
    double psi_term = 0.0;          // int 2 (1 - nu_e^2) phi^2 |psi'| |x| eps|grad u|^2
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

CaccioppoliReport caccioppoli_ratio(const ScalarField& u, const Hyperplane& plane, const Vec& center, double rho);

// |rho^{-n} mu(B_rho) - alpha omega_n| against the bundle on B_{3 rho}.
struct SobolevReport {
    double energy_difference = 0.0;
    double tilt = 0.0;         // E(B_3)
    double discrepancy = 0.0;  // |xi|(B_3)
    double willmore = 0.0;     // W(B_3)
    double sqrt_tilt_willmore = 0.0;
    double willmore_power = 0.0;  // W^{n/(n-2)} for n >= 3, W otherwise
    double exponent = 1.0;
    double bundle = 0.0;  // sum of the four terms
    double ratio = 0.0;   // energy_difference / bundle (0 when bundle is 0)
};

// Requires |u(center)| <= 1 - b at the nearest lattice point.
SobolevReport sobolev_defect(const ScalarField& u, const Vec& e, const Vec& center, double rho, double b);

// sup of eps|grad u| and of 1 - u^2 over h <= |x_{n+1}| <= L/4.
struct DecayProfile {
    double gradient = 0.0;   // eps |grad u|, 1 at the center of a wave
    double potential = 0.0;  // 1 - u^2
    double value() const { return gradient > potential ? gradient : potential; }
};
DecayProfile exponential_decay_profile(const ScalarField& u, double h);

}  // namespace aclab
