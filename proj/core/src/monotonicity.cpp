#include "aclab/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aclab/diagnostics.hpp"
#include "aclab/quadrature.hpp"

namespace aclab {

double huisken_kernel(const KernelPoint& kp, const Vec& x, double t) {
    double tau = kp.s - t;
    if (!(tau > 0.0)) throw std::invalid_argument("heat kernel needs t < s");
    if (kp.n < 0) throw std::invalid_argument("negative interface dimension");
    Vec d{x[0] - kp.y[0], x[1] - kp.y[1], x[2] - kp.y[2]};
    return std::pow(4.0 * std::numbers::pi * tau, -0.5 * kp.n) * std::exp(-dot(d, d) / (4.0 * tau));
}

namespace {

bool support_ok(const Grid& g, const KernelPoint& kp, double t, const TestFunction& rho) {
    double half = 0.5 * g.extent();
    double R = rho.support_radius();
    if (std::isfinite(R)) {
        bool inside = true;
        for (int a = 0; a < g.dim(); ++a)
            if (std::abs(rho.center()[a]) + R > half + 1e-12) inside = false;
        if (inside) return true;
    }
    double dist = half;
    for (int a = 0; a < g.dim(); ++a) dist = std::min(dist, half - std::abs(kp.y[a]));
    if (dist <= 0.0) return false;
    return std::exp(-dist * dist / (4.0 * (kp.s - t))) < 1e-12;
}

void check_kernel(const Grid& g, const KernelPoint& kp) {
    if (kp.n != g.dim() - 1) throw std::invalid_argument("kernel dimension must be grid dim - 1");
}

}  // namespace

GaussianDensity gaussian_density(const ScalarField& u, const KernelPoint& kp, const TestFunction& rho) {
    const auto& g = u.grid();
    check_kernel(g, kp);
    double t = u.time();
    if (!(t < kp.s)) throw std::invalid_argument("gaussian density needs t < s");
    auto e = energy_density(u);
    auto sp = rho.sample(g);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (sp.value[i] == 0.0) continue;
        s += huisken_kernel(kp, g.position(i), t) * sp.value[i] * e[i];
    }
    return {s * g.cell_volume(), support_ok(g, kp, t, rho)};
}

GaussianDensity gaussian_density(const Trajectory& tr, const KernelPoint& kp, double t, const TestFunction& rho) {
    return gaussian_density(tr.frame(tr.index_at(t)), kp, rho);
}

MonotonicityReport monotonicity_residual(const Trajectory& tr, const KernelPoint& kp, double t,
                                         const TestFunction& rho) {
    std::size_t k = tr.index_at(t);
    if (k == 0 || k + 1 >= tr.size()) throw std::invalid_argument("monotonicity residual needs an interior frame");
    const auto& g = tr.grid();
    check_kernel(g, kp);
    const auto& u = tr.frame(k);
    double tk = u.time();
    if (!(tr.frame(k + 1).time() < kp.s)) throw std::invalid_argument("monotonicity residual needs t + dt < s");

    MonotonicityReport m;
    m.time = tk;
    auto prev = gaussian_density(tr.frame(k - 1), kp, rho);
    auto next = gaussian_density(tr.frame(k + 1), kp, rho);
    auto here = gaussian_density(u, kp, rho);
    m.density = here.value;
    m.support_ok = here.support_ok && prev.support_ok && next.support_ok;
    m.rate = (next.value - prev.value) / (2.0 * tr.sample_interval());

    auto d = derivatives(u);
    auto sp = rho.sample(g);
    int dim = g.dim();
    double eps = u.epsilon();
    double tau = kp.s - tk;
    double diss = 0, disc = 0, rt = 0, hess = 0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        Vec x = g.position(p);
        double phi = huisken_kernel(kp, x, tk);
        if (phi == 0.0) continue;
        double gx = 0.0;
        for (int a = 0; a < dim; ++a) gx += d.gradient[a][p] * (x[a] - kp.y[a]);
        double q = -d.residual[p] + gx / (2.0 * tau);
        double w = sp.value[p] * phi;
        diss -= eps * w * q * q;
        double e = 0.5 * eps * d.gradient_norm2[p] + DoubleWell::value(u[p]) / eps;
        double xi = 0.5 * eps * d.gradient_norm2[p] - DoubleWell::value(u[p]) / eps;
        disc += w * xi / (2.0 * tau);
        rt += phi * rho.time_derivative(x, tk) * e;
        if (rho.is_constant()) continue;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double T = eps * d.gradient[i][p] * d.gradient[j][p] - (i == j ? e : 0.0);
                hess += T * phi * sp.hessian[i * dim + j][p];
            }
    }
    double dv = g.cell_volume();
    m.dissipative_term = diss * dv;
    m.discrepancy_term = disc * dv;
    m.rho_time_term = rt * dv;
    m.hessian_term = hess * dv;
    m.rhs = m.dissipative_term + m.discrepancy_term + m.rho_time_term + m.hessian_term;
    m.residual = std::abs(m.rate - m.rhs);
    return m;
}

namespace {

double vertical_moment(const ScalarField& e, const std::vector<std::size_t>& idx, const Vec& x0, int v,
                       const KernelPoint* kp) {
    const auto& g = e.grid();
    double s = 0.0;
    for (auto i : idx) {
        Vec x = g.position(i);
        double z = x[v] - x0[v];
        double w = z * z * e[i];
        if (kp) w *= huisken_kernel(*kp, x, e.time());
        s += w;
    }
    return s * g.cell_volume();
}

}  // namespace

double l2_linfty_ratio(const Trajectory& tr, const ParabolicCylinder& cyl, double t) {
    const auto& g = tr.grid();
    int n = g.dim() - 1;
    int v = g.vertical_axis();
    double r = cyl.radius;
    if (!(t < cyl.center_time)) throw std::invalid_argument("L2-Linfty ratio needs t < t0");
    auto times = tr.times();
    auto w = time_weights(times, cyl.center_time - r * r, cyl.center_time);
    auto big = ball_indices(g, cyl.center, r);
    double den = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0) den += w[k] * vertical_moment(energy_density(tr.frame(k)), big, cyl.center, v, nullptr);
    den *= std::pow(r, -n - 2);

    KernelPoint kp{cyl.center, cyl.center_time, n};
    auto half = ball_indices(g, cyl.center, 0.5 * r);
    double num = vertical_moment(energy_density(tr.frame(tr.index_at(t))), half, cyl.center, v, &kp);
    if (den <= 0.0) return 0.0;
    return num / den;
}

double l2_linfty_ratio(const Trajectory& tr, const ParabolicCylinder& cyl) {
    double lo = cyl.center_time - cyl.radius * cyl.radius;
    double best = 0.0;
    for (const auto& f : tr.frames()) {
        double t = f.time();
        if (t < lo - 1e-12 || t >= cyl.center_time) continue;
        best = std::max(best, l2_linfty_ratio(tr, cyl, t));
    }
    return best;
}

}  // namespace aclab
