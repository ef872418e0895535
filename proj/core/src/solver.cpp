#include "aclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "aclab/spectral.hpp"

namespace aclab {

Scheme parse_scheme(const std::string& name) {
    if (name == "semi_implicit" || name == "semi-implicit") return Scheme::semi_implicit;
    if (name == "explicit_rk2" || name == "rk2") return Scheme::explicit_rk2;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string to_string(Scheme s) { return s == Scheme::semi_implicit ? "semi_implicit" : "explicit_rk2"; }

double max_stable_dt(Scheme scheme, const Grid& grid, double epsilon) {
    double h = grid.spacing();
    if (scheme == Scheme::semi_implicit) return 0.5 * epsilon * epsilon;
    // spectral Laplacian has radius dim*pi^2/h^2, so h^2 alone is not enough past 1-D
    return 0.2 * std::min(h * h / grid.dim(), 0.25 * epsilon * epsilon);
}

void validate(const SolverConfig& cfg, const Grid& grid, double epsilon) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw std::invalid_argument("t_end must be non-negative");
    if (cfg.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    double limit = max_stable_dt(cfg.scheme, grid, epsilon);
    if (cfg.dt > limit * (1.0 + 1e-12))
        throw std::invalid_argument("dt " + std::to_string(cfg.dt) + " exceeds the stability limit " +
                                    std::to_string(limit) + " for " + to_string(cfg.scheme));
}

namespace {

class Stepper {
public:
    Stepper(const Grid& grid, double epsilon, const SolverConfig& cfg)
        : tr_(SpectralTransform::get(grid)), eps2_(epsilon * epsilon), cfg_(cfg), spec_(tr_->spectrum_size()),
          work_(grid.size()), k1_(grid.size()) {}

    void advance(std::vector<double>& u) {
        if (cfg_.scheme == Scheme::semi_implicit)
            semi_implicit(u);
        else
            rk2(u);
        for (double v : u)
            if (!std::isfinite(v)) throw std::runtime_error("solver diverged (non-finite values)");
    }

private:
    // (I - dt Lap) u' = u - dt W'(u) / eps^2
    void semi_implicit(std::vector<double>& u) {
        double dt = cfg_.dt;
        for (std::size_t i = 0; i < u.size(); ++i) work_[i] = u[i] - dt * DoubleWell::derivative(u[i]) / eps2_;
        tr_->forward(work_.data(), spec_.data());
        for (std::size_t s = 0; s < spec_.size(); ++s) spec_[s] /= 1.0 + dt * tr_->k_squared(s);
        tr_->inverse(spec_.data(), u.data());
    }

    void residual(const std::vector<double>& u, std::vector<double>& out) {
        tr_->forward(u.data(), spec_.data());
        for (std::size_t s = 0; s < spec_.size(); ++s) spec_[s] *= -tr_->k_squared(s);
        tr_->inverse(spec_.data(), out.data());
        for (std::size_t i = 0; i < u.size(); ++i) out[i] -= DoubleWell::derivative(u[i]) / eps2_;
    }

    // Heun
    void rk2(std::vector<double>& u) {
        double dt = cfg_.dt;
        residual(u, k1_);
        std::vector<double> mid(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) mid[i] = u[i] + dt * k1_[i];
        residual(mid, work_);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += 0.5 * dt * (k1_[i] + work_[i]);
    }

    std::shared_ptr<const SpectralTransform> tr_;
    double eps2_;
    SolverConfig cfg_;
    std::vector<std::complex<double>> spec_;
    std::vector<double> work_;
    std::vector<double> k1_;
};

long step_count(const SolverConfig& cfg) {
    double n = cfg.t_end / cfg.dt;
    long steps = std::lround(n);
    if (std::abs(n - steps) > 1e-6 * std::max(1.0, n))
        throw std::invalid_argument("t_end must be a whole number of time steps");
    return steps;
}

}  // namespace

ScalarField ac_residual(const ScalarField& u) {
    auto lap = laplacian(u);
    double eps2 = u.epsilon() * u.epsilon();
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = lap[i] - DoubleWell::derivative(u[i]) / eps2;
    return u.with_values(std::move(r));
}

ScalarField step(const ScalarField& u, const SolverConfig& cfg) {
    validate(cfg, u.grid(), u.epsilon());
    Stepper s(u.grid(), u.epsilon(), cfg);
    std::vector<double> v(u.values().begin(), u.values().end());
    s.advance(v);
    return ScalarField(u.grid(), std::move(v), u.epsilon(), u.time() + cfg.dt);
}

void evolve(const ScalarField& u0, const SolverConfig& cfg, const FrameObserver& on_frame) {
    validate(cfg, u0.grid(), u0.epsilon());
    long steps = step_count(cfg);
    Stepper s(u0.grid(), u0.epsilon(), cfg);
    std::vector<double> v(u0.values().begin(), u0.values().end());
    on_frame(u0);
    for (long k = 1; k <= steps; ++k) {
        s.advance(v);
        if (k % cfg.sample_every == 0) on_frame(ScalarField(u0.grid(), v, u0.epsilon(), u0.time() + k * cfg.dt));
    }
}

Trajectory evolve(const ScalarField& u0, const SolverConfig& cfg) {
    std::vector<ScalarField> frames;
    evolve(u0, cfg, [&](const ScalarField& f) { frames.push_back(f); });
    return Trajectory(std::move(frames), cfg.dt * cfg.sample_every);
}

ScalarField prepare_interface(const Grid& grid, double epsilon, const SignedDistance& d, double time) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    double band = 5.0 * epsilon * std::atanh(1.0 - 1e-6);
    const double clamp = 1.0 - 1e-12;
    double delta = 1e-5 * grid.spacing();
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        Vec x = grid.position(i);
        double di = d(x);
        if (!std::isfinite(di)) throw std::invalid_argument("signed distance returned a non-finite value");
        if (std::abs(di) <= band) {
            double g2 = 0.0;
            for (int a = 0; a < grid.dim(); ++a) {
                Vec xp = x, xm = x;
                xp[a] += delta;
                xm[a] -= delta;
                double g = (d(xp) - d(xm)) / (2.0 * delta);
                g2 += g * g;
            }
            if (std::sqrt(g2) > 1.0 + 1e-6)
                throw std::invalid_argument("signed distance is not 1-Lipschitz near the interface");
        }
        u[i] = std::clamp(std::tanh(di / epsilon), -clamp, clamp);
    }
    return ScalarField(grid, std::move(u), epsilon, time);
}

}  // namespace aclab
