#pragma once

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <numbers>
#include <span>
#include <random>
#include <vector>

#include "aclab/field.hpp"

namespace aclab::testing {

// Hand-rolled generators for the property tests. Every case draws from its own
// seeded engine so failures replay.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

    Vec unit(int dim) {
        std::normal_distribution<double> n(0.0, 1.0);
        for (;;) {
            Vec v{};
            for (int a = 0; a < dim; ++a) v[a] = n(rng);
            if (norm(v) > 1e-3) return normalized(v);
        }
    }

    Grid grid(int dim, int lo = 8, int hi = 32) {
        int n = 2 * integer(lo / 2, hi / 2);
        return Grid(dim, n, uniform(0.5, 2.0));
    }

    // Sum of random Fourier modes |m|_inf <= max_mode, scaled to max |u| = amp.
    ScalarField field(const Grid& g, double eps, int max_mode, double amp = 0.9) {
        struct Mode {
            std::array<int, max_dim> m{};
            double a, phi;
        };
        std::vector<Mode> modes;
        int count = integer(1, 6);
        for (int k = 0; k < count; ++k) {
            Mode md{};
            for (int a = 0; a < g.dim(); ++a) md.m[a] = integer(-max_mode, max_mode);
            md.a = uniform(0.2, 1.0);
            md.phi = uniform(0.0, 2.0 * std::numbers::pi);
            modes.push_back(md);
        }
        double L = g.extent();
        auto f = [&](const Vec& x) {
            double s = 0.0;
            for (const auto& md : modes) {
                double arg = md.phi;
                for (int a = 0; a < g.dim(); ++a) arg += 2.0 * std::numbers::pi * md.m[a] * x[a] / L;
                s += md.a * std::cos(arg);
            }
            return s;
        };
        auto u = ScalarField::sample(g, eps, f);
        double m = u.max_abs();
        std::vector<double> v(u.values().begin(), u.values().end());
        if (m > 0)
            for (auto& x : v) x *= amp / m;
        return u.with_values(std::move(v));
    }
};

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace aclab::testing
