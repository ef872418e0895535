#include "aclab/interfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace aclab {

namespace {

double wrap(double x, double period) {
    double y = std::fmod(x + 0.5 * period, period);
    if (y < 0) y += period;
    return y - 0.5 * period;
}

// log cosh without overflow
double log_cosh(double z) {
    double a = std::abs(z);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double sech2(double z) {
    double c = std::cosh(std::min(std::abs(z), 350.0));
    return 1.0 / (c * c);
}

}  // namespace

GraphProfile cosine_profile(double amplitude, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    double k = 2.0 * std::numbers::pi / wavelength;
    GraphProfile p;
    p.f = [=](double x) { return amplitude * std::cos(k * x); };
    p.df = [=](double x) { return -amplitude * k * std::sin(k * x); };
    p.d2f = [=](double x) { return -amplitude * k * k * std::cos(k * x); };
    p.curvature_bound = std::abs(amplitude) * k * k;
    return p;
}

GraphProfile tilted_profile(double slope, double period, double width) {
    if (!(period > 0.0) || !(width > 0.0) || width > period / 16)
        throw std::invalid_argument("tilted profile needs 0 < width <= period/16");
    double q = 0.25 * period;
    // joins summed over the images k = -2..2; the tails of |k| >= 3 are below e^-40,
    // so the profile is periodic to rounding
    auto images = [=](double x, auto&& term) {
        x = wrap(x, period);
        double s = 0.0;
        for (int k = -2; k <= 2; ++k) s += term(x + k * period + q) - term(x + k * period - q);
        return std::pair{x, s};
    };
    GraphProfile p;
    p.f = [=](double x) {
        auto [y, s] = images(x, [=](double z) { return width * log_cosh(z / width); });
        return slope * (-y + s);
    };
    p.df = [=](double x) {
        auto [y, s] = images(x, [=](double z) { return std::tanh(z / width); });
        return slope * (-1.0 + s);
    };
    p.d2f = [=](double x) {
        auto [y, s] = images(x, [=](double z) { return sech2(z / width); });
        return slope / width * s;
    };
    p.curvature_bound = std::abs(slope) / width;
    return p;
}

SignedDistance slab_distance(const Grid& grid, double offset) {
    double L = grid.extent();
    int v = grid.vertical_axis();
    return [=](const Vec& x) {
        double y = wrap(x[v] - offset, L);
        if (std::abs(y) <= 0.25 * L) return y;
        return std::copysign(0.5 * L, y) - y;
    };
}

SignedDistance sphere_distance(const Vec& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
    return [=](const Vec& x) {
        Vec d{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
        return radius - norm(d);
    };
}

SignedDistance graph_distance(const Grid& grid, GraphProfile p) {
    if (grid.dim() < 2) throw std::invalid_argument("graph interfaces need dim >= 2");
    double L = grid.extent();
    int v = grid.vertical_axis();
    return [=](const Vec& x) {
        double s = x[0];
        double z = wrap(x[v], L);
        double zf = z - p.f(s);
        double D = std::abs(zf);
        // g(sigma) = (sigma - s) + (f(sigma) - z) f'(sigma); the foot point solves g = 0
        auto g = [&](double t) { return (t - s) + (p.f(t) - z) * p.df(t); };
        auto gp = [&](double t) { return 1.0 + p.df(t) * p.df(t) + (p.f(t) - z) * p.d2f(t); };
        auto dist2 = [&](double t) {
            double a = t - s, b = p.f(t) - z;
            return a * a + b * b;
        };
        double sigma = s;
        if (D > 0.0) {
            double lo = s - D, hi = s + D;
            if ((D + 0.0) * p.curvature_bound < 0.9) {
                // g is increasing on the bracket: safeguarded Newton
                for (int it = 0; it < 100; ++it) {
                    double gv = g(sigma);
                    if (gv == 0.0) break;
                    if (gv > 0) hi = sigma; else lo = sigma;
                    double next = sigma - gv / gp(sigma);
                    if (std::abs(next - sigma) <= 1e-14 * std::max(1.0, std::abs(sigma))) { sigma = next; break; }
                    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                    sigma = next;
                }
            } else {
                // sample finer than the curvature radius, then polish with Newton
                int m = std::clamp(static_cast<int>(std::ceil(16.0 * D * p.curvature_bound)), 16, 256);
                double best = dist2(s);
                for (int i = 0; i <= m; ++i) {
                    double t = lo + (hi - lo) * i / m;
                    double d2 = dist2(t);
                    if (d2 < best) { best = d2; sigma = t; }
                }
                double step = (hi - lo) / m;
                double a = sigma - step, b = sigma + step;
                for (int it = 0; it < 100; ++it) {
                    double gv = g(sigma), gd = gp(sigma);
                    double next = gd > 0 ? sigma - gv / gd : sigma;
                    if (!(next > a && next < b)) break;
                    if (std::abs(next - sigma) <= 1e-14 * std::max(1.0, std::abs(sigma))) { sigma = next; break; }
                    sigma = next;
                }
            }
        }
        double dmain = std::sqrt(dist2(sigma));
        if (zf >= 0) return std::min(dmain, 0.5 * L - z);
        return -std::min(dmain, z + 0.5 * L);
    };
}

}  // namespace aclab
