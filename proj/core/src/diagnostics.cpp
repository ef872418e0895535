#include "aclab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "aclab/quadrature.hpp"
#include "aclab/spectral.hpp"

namespace aclab {

FieldDerivatives derivatives(const ScalarField& u) {
    const auto& g = u.grid();
    auto tr = SpectralTransform::get(g);
    std::vector<std::complex<double>> spec(tr->spectrum_size()), work(tr->spectrum_size());
    tr->forward(u.values().data(), spec.data());

    FieldDerivatives d;
    std::size_t n = g.size();
    d.gradient.assign(g.dim(), std::vector<double>(n));
    d.gradient_norm2.assign(n, 0.0);
    d.residual.assign(n, 0.0);
    for (int a = 0; a < g.dim(); ++a) {
        for (std::size_t s = 0; s < spec.size(); ++s)
            work[s] = spec[s] * std::complex<double>(0.0, tr->derivative_wavenumber(a, s));
        tr->inverse(work.data(), d.gradient[a].data());
        for (std::size_t i = 0; i < n; ++i) d.gradient_norm2[i] += d.gradient[a][i] * d.gradient[a][i];
    }
    for (std::size_t s = 0; s < spec.size(); ++s) work[s] = -tr->k_squared(s) * spec[s];
    tr->inverse(work.data(), d.residual.data());
    double eps2 = u.epsilon() * u.epsilon();
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d.residual[i] -= DoubleWell::derivative(u[i]) / eps2;
        gmax = std::max(gmax, d.gradient_norm2[i]);
    }
    d.gradient_floor = 1e-8 * std::sqrt(gmax);
    return d;
}

namespace {

int interface_dim(const Grid& g) { return g.dim() - 1; }

double energy_at(const ScalarField& u, const FieldDerivatives& d, std::size_t i) {
    double eps = u.epsilon();
    return 0.5 * eps * d.gradient_norm2[i] + DoubleWell::value(u[i]) / eps;
}

double discrepancy_at(const ScalarField& u, const FieldDerivatives& d, std::size_t i) {
    double eps = u.epsilon();
    return 0.5 * eps * d.gradient_norm2[i] - DoubleWell::value(u[i]) / eps;
}

// (1 - (nu.e)^2) eps |grad u|^2, zero below the gradient floor
double tilt_at(const ScalarField& u, const FieldDerivatives& d, const Vec& e, std::size_t i) {
    double g2 = d.gradient_norm2[i];
    if (std::sqrt(g2) <= d.gradient_floor) return 0.0;
    double ge = 0.0;
    for (int a = 0; a < u.grid().dim(); ++a) ge += d.gradient[a][i] * e[a];
    return std::max(0.0, u.epsilon() * (g2 - ge * ge));
}

double sum_over(const std::vector<std::size_t>& idx, const Grid& g, auto&& f) {
    double s = 0.0;
    for (auto i : idx) s += f(i);
    return s * g.cell_volume();
}

void check_direction(const Vec& e, int dim) { validate_hyperplane(Hyperplane{e, 0.0}, dim); }

double spatial_tilt(const ScalarField& u, const Vec& e, const std::vector<std::size_t>& idx) {
    auto d = derivatives(u);
    return sum_over(idx, u.grid(), [&](std::size_t i) { return tilt_at(u, d, e, i); });
}

double spatial_height(const ScalarField& u, const Hyperplane& p, const Vec& c, const std::vector<std::size_t>& idx) {
    auto d = derivatives(u);
    const auto& g = u.grid();
    return sum_over(idx, g, [&](std::size_t i) {
        Vec x = g.position(i);
        double y = 0.0;
        for (int a = 0; a < g.dim(); ++a) y += p.normal[a] * (x[a] - c[a]);
        y -= p.offset;
        return y * y * u.epsilon() * d.gradient_norm2[i];
    });
}

double spatial_willmore(const ScalarField& u, const std::vector<std::size_t>& idx) {
    auto d = derivatives(u);
    return sum_over(idx, u.grid(), [&](std::size_t i) { return u.epsilon() * d.residual[i] * d.residual[i]; });
}

}  // namespace

ScalarField energy_density(const ScalarField& u) {
    auto d = derivatives(u);
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = energy_at(u, d, i);
    return u.with_values(std::move(v));
}

ScalarField discrepancy(const ScalarField& u) {
    auto d = derivatives(u);
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = discrepancy_at(u, d, i);
    return u.with_values(std::move(v));
}

double energy(const ScalarField& u, const Region& region) { return integrate(energy_density(u), region); }

double energy(const Trajectory& tr, const Region& region) {
    auto idx = region_indices(tr.grid(), region);
    return integrate_in_time(tr, region, [&](const ScalarField& f) { return integrate(energy_density(f), idx); });
}

double tilt_excess(const ScalarField& u, const Vec& e, const Region& region) {
    check_direction(e, u.grid().dim());
    auto idx = region_indices(u.grid(), region);
    return std::pow(region.scale(), -interface_dim(u.grid())) * spatial_tilt(u, e, idx);
}

double tilt_excess(const Trajectory& tr, const Vec& e, const Region& region) {
    check_direction(e, tr.grid().dim());
    auto idx = region_indices(tr.grid(), region);
    double s = integrate_in_time(tr, region, [&](const ScalarField& f) { return spatial_tilt(f, e, idx); });
    return std::pow(region.scale(), -interface_dim(tr.grid()) - 2) * s;
}

double height_excess(const ScalarField& u, const Hyperplane& plane, const Region& region) {
    validate_hyperplane(plane, u.grid().dim());
    auto idx = region_indices(u.grid(), region);
    return std::pow(region.scale(), -interface_dim(u.grid()) - 2) * spatial_height(u, plane, region.center(), idx);
}

double height_excess(const Trajectory& tr, const Hyperplane& plane, const Region& region) {
    validate_hyperplane(plane, tr.grid().dim());
    auto idx = region_indices(tr.grid(), region);
    Vec c = region.center();
    double s = integrate_in_time(tr, region, [&](const ScalarField& f) { return spatial_height(f, plane, c, idx); });
    return std::pow(region.scale(), -interface_dim(tr.grid()) - 4) * s;
}

double willmore(const ScalarField& u, const Region& region) {
    return spatial_willmore(u, region_indices(u.grid(), region));
}

double willmore(const Trajectory& tr, const Region& region) {
    auto idx = region_indices(tr.grid(), region);
    return integrate_in_time(tr, region, [&](const ScalarField& f) { return spatial_willmore(f, idx); });
}

DiagnosticsRecord diagnose(const ScalarField& u, const Region& region) {
    const auto& g = u.grid();
    auto idx = region_indices(g, region);
    auto d = derivatives(u);
    int n = interface_dim(g);
    double r = region.scale();
    Vec c = region.center();
    Vec e = unit_axis(g.vertical_axis());
    DiagnosticsRecord rec;
    rec.time = u.time();
    rec.region = region.describe();
    rec.discrepancy_max = -std::numeric_limits<double>::infinity();
    double en = 0, tilt = 0, height = 0, will = 0, xi1 = 0;
    for (auto i : idx) {
        en += energy_at(u, d, i);
        tilt += tilt_at(u, d, e, i);
        double y = g.position(i)[g.vertical_axis()] - c[g.vertical_axis()];
        height += y * y * u.epsilon() * d.gradient_norm2[i];
        will += u.epsilon() * d.residual[i] * d.residual[i];
        double xi = discrepancy_at(u, d, i);
        xi1 += std::abs(xi);
        rec.discrepancy_max = std::max(rec.discrepancy_max, xi);
    }
    double dv = g.cell_volume();
    rec.energy = en * dv;
    rec.tilt_excess = std::pow(r, -n) * tilt * dv;
    rec.height_excess = std::pow(r, -n - 2) * height * dv;
    rec.willmore = will * dv;
    rec.discrepancy_l1 = xi1 * dv;
    if (idx.empty()) rec.discrepancy_max = 0.0;
    return rec;
}

std::vector<DiagnosticsRecord> diagnose(const Trajectory& tr, const Region& region) {
    std::vector<DiagnosticsRecord> out;
    for (const auto& f : tr.frames()) {
        if (!region.is_whole_box()) {
            const auto& c = region.cylinder();
            double r2 = c.radius * c.radius;
            if (std::abs(f.time() - c.center_time) > r2 * (1 + 1e-12)) continue;
        }
        out.push_back(diagnose(f, region));
    }
    return out;
}

std::string diagnostics_csv_header() {
    return "time,region_descriptor,energy,tilt_excess,height_excess,willmore,discrepancy_l1,discrepancy_max";
}

std::string to_csv_row(const DiagnosticsRecord& r) {
    std::ostringstream os;
    os << std::setprecision(17) << r.time << ",\"" << r.region << "\"," << r.energy << "," << r.tilt_excess << ","
       << r.height_excess << "," << r.willmore << "," << r.discrepancy_l1 << "," << r.discrepancy_max;
    return os.str();
}

StressTensor stress_energy(const ScalarField& u) {
    auto d = derivatives(u);
    int dim = u.grid().dim();
    std::size_t n = u.size();
    double eps = u.epsilon();
    StressTensor T;
    T.dim = dim;
    T.components.assign(dim * dim, std::vector<double>(n));
    for (std::size_t p = 0; p < n; ++p) {
        double e = energy_at(u, d, p);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                T.components[i * dim + j][p] = eps * d.gradient[i][p] * d.gradient[j][p] - (i == j ? e : 0.0);
    }
    return T;
}

double divergence_defect(const ScalarField& u) {
    auto d = derivatives(u);
    auto T = stress_energy(u);
    int dim = u.grid().dim();
    std::size_t n = u.size();
    double worst = 0.0;
    for (int j = 0; j < dim; ++j) {
        std::vector<double> div(n, 0.0);
        for (int i = 0; i < dim; ++i) {
            auto dT = partial_derivative(u.with_values(T(i, j)), i);
            for (std::size_t p = 0; p < n; ++p) div[p] += dT[p];
        }
        for (std::size_t p = 0; p < n; ++p)
            worst = std::max(worst, std::abs(div[p] - u.epsilon() * d.residual[p] * d.gradient[j][p]));
    }
    return worst;
}

namespace {

void check_support(const TestFunction& phi, const Grid& g) {
    if (phi.is_constant()) return;
    double R = phi.support_radius();
    if (!std::isfinite(R)) return;
    double half = 0.5 * g.extent();
    for (int a = 0; a < g.dim(); ++a)
        if (std::abs(phi.center()[a]) + R > half + 1e-12) throw std::invalid_argument("test function leaves the box");
}

double weighted_energy(const ScalarField& u, const std::vector<double>& w) {
    auto d = derivatives(u);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * energy_at(u, d, i);
    return s * u.grid().cell_volume();
}

}  // namespace

BrakkeResidual brakke_residual(const Trajectory& tr, const TestFunction& phi, double t) {
    std::size_t k = tr.index_at(t);
    if (k == 0 || k + 1 >= tr.size()) throw std::invalid_argument("brakke residual needs an interior frame");
    const auto& g = tr.grid();
    check_support(phi, g);
    auto sp = phi.sample(g);
    double dts = tr.sample_interval();

    BrakkeResidual out;
    out.time = tr.frame(k).time();
    out.measured_rate = (weighted_energy(tr.frame(k + 1), sp.value) - weighted_energy(tr.frame(k - 1), sp.value)) /
                        (2.0 * dts);

    const auto& u = tr.frame(k);
    auto d = derivatives(u);
    int dim = g.dim();
    double eps = u.epsilon();
    double diss = 0.0, transport = 0.0, tensor = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        double r = d.residual[p];
        diss += eps * sp.value[p] * r * r;
        if (phi.is_constant()) continue;
        double gpgu = 0.0;
        for (int a = 0; a < dim; ++a) gpgu += sp.gradient[a][p] * d.gradient[a][p];
        transport += eps * gpgu * r;
        double e = energy_at(u, d, p);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double T = eps * d.gradient[i][p] * d.gradient[j][p] - (i == j ? e : 0.0);
                tensor += T * sp.hessian[i * dim + j][p];
            }
    }
    double dv = g.cell_volume();
    out.dissipation = diss * dv;
    out.rhs_direct = -out.dissipation - transport * dv;
    out.rhs_tensor = -out.dissipation + tensor * dv;
    out.residual_direct = std::abs(out.measured_rate - out.rhs_direct);
    out.residual_tensor = std::abs(out.measured_rate - out.rhs_tensor);
    return out;
}

DissipationDefect energy_dissipation_defect(const Trajectory& tr) {
    if (tr.size() < 2) throw std::invalid_argument("dissipation check needs at least two frames");
    auto t = tr.times();
    auto w = time_weights(t, t.front(), t.back());
    double diss = 0.0;
    for (std::size_t k = 0; k < tr.size(); ++k) diss += w[k] * willmore(tr.frame(k), Region::whole_box());
    DissipationDefect out;
    out.energy_change = energy(tr.back(), Region::whole_box()) - energy(tr.front(), Region::whole_box());
    out.dissipation = diss;
    out.defect = std::abs(out.energy_change + diss);
    out.relative_defect = out.energy_change != 0.0 ? out.defect / std::abs(out.energy_change) : out.defect;
    return out;
}

namespace {

// psi: 1 on |y| <= 1/2, 0 past 0.99, derivative profile (1 - t^4)^2 so |psi'| < 3
Jet caccioppoli_psi(double y) {
    constexpr double a = 0.5, b = 0.99;
    constexpr double C = 1.0 - 2.0 / 5.0 + 1.0 / 9.0;
    double s = std::abs(y);
    if (s <= a) return {1.0, 0.0, 0.0};
    if (s >= b) return {0.0, 0.0, 0.0};
    double w = b - a;
    double t = 2.0 * (s - a) / w - 1.0;
    double t4 = t * t * t * t;
    double G = t - 0.4 * t4 * t + t4 * t4 * t / 9.0;
    double F = (G + C) / (2.0 * C);
    double dF = (1.0 - t4) * (1.0 - t4) / (2.0 * C) * (2.0 / w);
    double sign = y < 0 ? -1.0 : 1.0;
    return {1.0 - F, -sign * dF, 0.0};
}

}  // namespace

CaccioppoliReport caccioppoli_ratio(const ScalarField& u, const Hyperplane& plane, const Vec& center, double rho) {
    const auto& g = u.grid();
    validate_hyperplane(plane, g.dim());
    if (g.dim() < 2) throw std::invalid_argument("caccioppoli ratio needs dim >= 2");
    if (!(rho > 0.0)) throw std::invalid_argument("ball radius must be positive");
    int n = interface_dim(g);
    double inner = std::pow(2.0 / 3.0, 1.0 / n), outer = std::pow(5.0 / 6.0, 1.0 / n);
    auto idx = ball_indices(g, center, rho * std::sqrt(1.0 + outer * outer));

    double umin = 1.0, umax = -1.0;
    for (auto i : ball_indices(g, center, rho)) {
        umin = std::min(umin, u[i]);
        umax = std::max(umax, u[i]);
    }
    if (!(umin < 0.0 && umax > 0.0)) throw std::invalid_argument("interface does not cross the ball");

    auto d = derivatives(u);
    const Vec& e = plane.normal;
    double eps = u.epsilon();
    double tilt = 0, xi = 0, height = 0, will = 0, psi_t = 0;
    for (auto i : idx) {
        Vec x = g.position(i);
        Vec y{};
        for (int a = 0; a < g.dim(); ++a) y[a] = (x[a] - center[a]) / rho;
        double yv = dot(y, e) - plane.offset / rho;
        double ye = dot(y, e);
        Vec yh{y[0] - ye * e[0], y[1] - ye * e[1], y[2] - ye * e[2]};
        double phi = smooth_step_down(norm(yh), inner, outer).value;
        if (phi == 0.0) continue;
        auto psi = caccioppoli_psi(yv);
        double w = phi * phi * psi.value * psi.value;
        double dir = tilt_at(u, d, e, i);
        double g2 = eps * d.gradient_norm2[i];
        tilt += w * dir;
        xi += w * std::abs(discrepancy_at(u, d, i));
        height += w * yv * yv * g2;
        will += w * eps * d.residual[i] * d.residual[i];
        psi_t += 2.0 * dir * phi * phi * std::abs(psi.d1) * std::abs(yv);
    }
    // unit-ball rescaling: dx -> rho^{-n-1}, eps -> eps/rho
    double dv = g.cell_volume();
    double s = std::pow(rho, -n) * dv;
    CaccioppoliReport r;
    r.tilt_term = tilt * s;
    r.discrepancy_term = xi * s;
    r.height_term = height * s;
    r.willmore_term = will * s * rho * rho;
    r.mixed_term = std::sqrt(r.height_term * r.willmore_term);
    r.psi_term = psi_t * s;
    r.lhs = r.tilt_term + r.discrepancy_term;
    r.rhs = r.height_term + r.mixed_term + r.psi_term;
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
    return r;
}

SobolevReport sobolev_defect(const ScalarField& u, const Vec& e, const Vec& center, double rho, double b) {
    const auto& g = u.grid();
    check_direction(e, g.dim());
    if (!(rho > 0.0)) throw std::invalid_argument("ball radius must be positive");
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("level band b must lie in (0,1)");
    std::array<int, max_dim> near{};
    for (int a = 0; a < g.dim(); ++a) near[a] = static_cast<int>(std::lround((center[a] + 0.5 * g.extent()) / g.spacing()));
    if (std::abs(u[g.ravel(near)]) > 1.0 - b) throw std::invalid_argument("|u(center)| exceeds 1 - b");

    int n = interface_dim(g);
    auto d = derivatives(u);
    double eps = u.epsilon();
    double dv = g.cell_volume();
    double mu1 = 0.0;
    for (auto i : ball_indices(g, center, rho)) mu1 += energy_at(u, d, i);
    mu1 *= dv;
    double tilt = 0, xi = 0, will = 0;
    for (auto i : ball_indices(g, center, 3.0 * rho)) {
        tilt += tilt_at(u, d, e, i);
        xi += std::abs(discrepancy_at(u, d, i));
        will += eps * d.residual[i] * d.residual[i];
    }
    double s = std::pow(rho, -n);
    SobolevReport r;
    r.energy_difference = std::abs(s * mu1 - DoubleWell::alpha * unit_ball_volume(n));
    r.tilt = std::pow(3.0, -n) * s * tilt * dv;
    r.discrepancy = s * xi * dv;
    r.willmore = s * rho * rho * will * dv;
    r.sqrt_tilt_willmore = std::sqrt(r.tilt * r.willmore);
    r.exponent = n >= 3 ? static_cast<double>(n) / (n - 2) : 1.0;
    r.willmore_power = std::pow(r.willmore, r.exponent);
    r.bundle = r.tilt + r.discrepancy + r.sqrt_tilt_willmore + r.willmore_power;
    r.ratio = r.bundle > 0.0 ? r.energy_difference / r.bundle : 0.0;
    return r;
}

DecayProfile exponential_decay_profile(const ScalarField& u, double h) {
    if (!(h >= 0.0)) throw std::invalid_argument("decay height must be non-negative");
    const auto& g = u.grid();
    auto d = derivatives(u);
    int v = g.vertical_axis();
    double window = 0.25 * g.extent();
    DecayProfile p;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double z = std::abs(g.position(i)[v]);
        if (z < h || z > window) continue;
        p.gradient = std::max(p.gradient, u.epsilon() * std::sqrt(d.gradient_norm2[i]));
        p.potential = std::max(p.potential, 1.0 - u[i] * u[i]);
    }
    return p;
}

}  // namespace aclab
