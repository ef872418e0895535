#include "aclab/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "aclab/diagnostics.hpp"
#include "aclab/quadrature.hpp"
#include "aclab/spectral.hpp"

namespace aclab {

namespace {

constexpr double clamp_level = 1.0 - 1e-12;

// Trigonometric interpolant of one periodic column.
class ColumnInterpolant {
public:
    ColumnInterpolant(std::span<const double> values, double extent) : n_(values.size()), extent_(extent) {
        auto tr = SpectralTransform::get(Grid(1, static_cast<int>(n_), extent));
        coef_ = tr->forward(values);
        for (auto& c : coef_) c /= static_cast<double>(n_);
    }

    // value and derivative at coordinate z
    std::pair<double, double> eval(double z) const {
        double x = z + 0.5 * extent_;
        double k1 = 2.0 * std::numbers::pi / extent_;
        std::complex<double> w(std::cos(k1 * x), std::sin(k1 * x));
        std::complex<double> p(1.0, 0.0);
        double v = coef_[0].real(), dv = 0.0;
        std::size_t half = n_ / 2;
        for (std::size_t j = 1; j < half; ++j) {
            p *= w;
            std::complex<double> t = coef_[j] * p;
            v += 2.0 * t.real();
            dv -= 2.0 * k1 * j * t.imag();
        }
        double kn = k1 * half;
        v += coef_[half].real() * std::cos(kn * x);
        dv -= coef_[half].real() * kn * std::sin(kn * x);
        return {v, dv};
    }

private:
    std::size_t n_;
    double extent_;
    std::vector<std::complex<double>> coef_;
};

std::span<const double> column(std::span<const double> values, std::size_t b, int n) {
    return values.subspan(b * static_cast<std::size_t>(n), static_cast<std::size_t>(n));
}

struct Root {
    double h = 0.0;
    bool ok = false;
};

Root column_root(std::span<const double> col, double s, double extent, double window, double slope_floor) {
    int n = static_cast<int>(col.size());
    double h = extent / n;
    int crossings = 0, at = -1;
    for (int i = 0; i + 1 < n; ++i) {
        double z0 = -0.5 * extent + i * h, z1 = z0 + h;
        if (std::abs(z0) > window || std::abs(z1) > window) continue;
        bool a = col[i] - s >= 0.0, b = col[i + 1] - s >= 0.0;
        if (a != b) {
            ++crossings;
            at = i;
        }
    }
    if (crossings != 1) return {};
    ColumnInterpolant p(col, extent);
    double lo = -0.5 * extent + at * h, hi = lo + h;
    double flo = col[at] - s;
    for (int it = 0; it < 12; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = p.eval(mid).first - s;
        if ((fm >= 0.0) == (flo >= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double z = 0.5 * (lo + hi);
    double a = -0.5 * extent + at * h, b = a + h;
    for (int it = 0; it < 50; ++it) {
        auto [v, dv] = p.eval(z);
        if (std::abs(v - s) <= 1e-13) break;
        if (dv == 0.0) break;
        double next = std::clamp(z - (v - s) / dv, a, b);
        if (next == z) break;
        z = next;
    }
    auto [v, dv] = p.eval(z);
    if (std::abs(v - s) > 1e-12 || std::abs(dv) <= slope_floor) return {};
    return {z, true};
}

void extract_frame(const ScalarField& u, double s, double window, std::vector<double>& h, std::vector<char>& ok) {
    const auto& g = u.grid();
    int n = g.points();
    std::size_t nb = g.size() / n;
    h.assign(nb, 0.0);
    ok.assign(nb, 0);
    double floor = 1e-6 / u.epsilon();
    for (std::size_t b = 0; b < nb; ++b) {
        auto r = column_root(column(u.values(), b, n), s, g.extent(), window, floor);
        h[b] = r.h;
        ok[b] = r.ok ? 1 : 0;
    }
}

// derivative of the graph along base axis a at base point b; nullopt if the stencil is not valid
std::optional<double> base_derivative(const LevelSetGraph& g, std::size_t frame, std::size_t b, int axis) {
    int n = g.points;
    int d = g.base_dim;
    std::array<int, max_dim> idx{};
    std::size_t rest = b;
    for (int a = d - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rest % n);
        rest /= n;
    }
    auto at = [&](int off) -> std::optional<double> {
        auto j = idx;
        j[axis] = ((j[axis] + off) % n + n) % n;
        std::size_t f = 0;
        for (int a = 0; a < d; ++a) f = f * n + j[a];
        if (!g.valid[frame][f]) return std::nullopt;
        return g.heights[frame][f];
    };
    double hstep = g.extent / n;
    auto m2 = at(-2), m1 = at(-1), p1 = at(1), p2 = at(2);
    if (m2 && m1 && p1 && p2) return (*m2 - 8.0 * *m1 + 8.0 * *p1 - *p2) / (12.0 * hstep);
    if (m1 && p1) return (*p1 - *m1) / (2.0 * hstep);
    return std::nullopt;
}

}  // namespace

ScalarField distance_function(const ScalarField& u) {
    std::vector<double> z(u.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = u.epsilon() * std::atanh(std::clamp(u[i], -clamp_level, clamp_level));
    return u.with_values(std::move(z));
}

double max_distance_gradient(const ScalarField& u, double band) {
    auto d = derivatives(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) > band) continue;
        worst = std::max(worst, u.epsilon() * std::sqrt(d.gradient_norm2[i]) / (1.0 - u[i] * u[i]));
    }
    return worst;
}

std::size_t LevelSetGraph::base_size() const {
    std::size_t s = 1;
    for (int a = 0; a < base_dim; ++a) s *= points;
    return s;
}

Vec LevelSetGraph::base_position(std::size_t b) const {
    Vec x{};
    double h = extent / points;
    for (int a = base_dim - 1; a >= 0; --a) {
        x[a] = -0.5 * extent + (b % points) * h;
        b /= points;
    }
    return x;
}

double LevelSetGraph::validity_fraction() const {
    std::size_t total = 0, good = 0;
    for (const auto& v : valid) {
        total += v.size();
        for (char c : v) good += c ? 1 : 0;
    }
    return total ? static_cast<double>(good) / total : 0.0;
}

Grid LevelSetGraph::base_grid() const {
    if (base_dim < 1) throw std::logic_error("graph over a point has no base grid");
    return Grid(base_dim, points, extent);
}

LevelSetGraph extract_graph(const Trajectory& tr, double s, std::optional<double> window) {
    if (!(std::abs(s) < 1.0)) throw std::invalid_argument("level must lie in (-1, 1)");
    const auto& g = tr.grid();
    LevelSetGraph out;
    out.level = s;
    out.base_dim = g.dim() - 1;
    out.points = g.points();
    out.extent = g.extent();
    out.window = window.value_or(0.25 * g.extent());
    if (!(out.window > 0.0)) throw std::invalid_argument("search window must be positive");
    for (const auto& f : tr.frames()) {
        out.times.push_back(f.time());
        out.heights.emplace_back();
        out.valid.emplace_back();
        extract_frame(f, s, out.window, out.heights.back(), out.valid.back());
    }
    if (out.validity_fraction() == 0.0) throw std::runtime_error("level set has no valid column");
    return out;
}

LevelSetGraph extract_graph(const ScalarField& u, double s, std::optional<double> window) {
    return extract_graph(Trajectory({u}, 0.0), s, window);
}

std::string graph_csv(const LevelSetGraph& graph) {
    std::ostringstream out;
    out.precision(17);
    out << 't';
    for (int a = 0; a < graph.base_dim; ++a) out << ",x" << a + 1;
    out << ",h,valid\n";
    for (std::size_t k = 0; k < graph.times.size(); ++k)
        for (std::size_t b = 0; b < graph.base_size(); ++b) {
            out << graph.times[k];
            Vec x = graph.base_position(b);
            for (int a = 0; a < graph.base_dim; ++a) out << ',' << x[a];
            out << ',' << graph.heights[k][b] << ',' << (graph.valid[k][b] ? 1 : 0) << '\n';
        }
    return out.str();
}

std::vector<double> column_crossings(const ScalarField& u, std::size_t base_point, double s) {
    const auto& g = u.grid();
    int n = g.points();
    if (base_point >= g.size() / n) throw std::out_of_range("base point out of range");
    auto col = column(u.values(), base_point, n);
    double h = g.spacing();
    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        if ((col[i] - s >= 0.0) == (col[j] - s >= 0.0)) continue;
        // one bracket at a time: a window around the pair holds exactly this crossing
        double z0 = g.coordinate(i);
        std::vector<double> shifted(n);
        int shift = n / 2 - i;
        for (int k = 0; k < n; ++k) shifted[((k + shift) % n + n) % n] = col[k];
        auto r = column_root(shifted, s, g.extent(), 1.25 * h, 0.0);
        if (!r.ok) throw std::runtime_error("crossing refinement failed");
        double z = r.h + z0;
        if (z >= 0.5 * g.extent()) z -= g.extent();
        roots.push_back(z);
    }
    return roots;
}

double DerivativeRelations::max() const { return std::max({vertical, horizontal, temporal}); }

DerivativeRelations graph_derivative_relations(const Trajectory& tr, double s, double ds) {
    if (!(ds > 0.0) || std::abs(s) + ds >= 1.0) throw std::invalid_argument("bad level increment");
    auto g0 = extract_graph(tr, s);
    auto gp = extract_graph(tr, s + ds);
    auto gm = extract_graph(tr, s - ds);
    const auto& grid = tr.grid();
    int n = grid.points();
    int v = grid.vertical_axis();
    DerivativeRelations out;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const auto& u = tr.frame(k);
        bool timed = k > 0 && k + 1 < tr.size();
        auto d = derivatives(u);
        for (std::size_t b = 0; b < g0.base_size(); ++b) {
            if (!g0.valid[k][b] || !gp.valid[k][b] || !gm.valid[k][b]) continue;
            double h = g0.heights[k][b];
            double hs = (gp.heights[k][b] - gm.heights[k][b]) / (2.0 * ds);
            double uv = ColumnInterpolant(column(d.gradient[v], b, n), grid.extent()).eval(h).first;
            double scale = std::abs(uv);
            if (scale == 0.0) continue;
            out.vertical = std::max(out.vertical, std::abs(uv - 1.0 / hs) / scale);
            for (int a = 0; a < g0.base_dim; ++a) {
                auto ha = base_derivative(g0, k, b, a);
                if (!ha) continue;
                double ua = ColumnInterpolant(column(d.gradient[a], b, n), grid.extent()).eval(h).first;
                out.horizontal = std::max(out.horizontal, std::abs(ua + *ha / hs) / scale);
            }
            if (timed && g0.valid[k - 1][b] && g0.valid[k + 1][b]) {
                double ht = (g0.heights[k + 1][b] - g0.heights[k - 1][b]) / (2.0 * tr.sample_interval());
                double ut = ColumnInterpolant(column(d.residual, b, n), grid.extent()).eval(h).first;
                out.temporal = std::max(out.temporal, std::abs(ut + ht / hs) / scale);
            }
            ++out.points_checked;
        }
    }
    return out;
}

DerivativeRelations graph_derivative_relations(const ScalarField& u, double s, double ds) {
    return graph_derivative_relations(Trajectory({u}, 0.0), s, ds);
}

namespace {

std::vector<std::size_t> periodic_ball(const Grid& base, std::size_t center, double r) {
    std::vector<std::size_t> out;
    auto c = base.unravel(center);
    int n = base.points();
    double h = base.spacing();
    int reach = static_cast<int>(std::floor(r / h + 1e-9));
    reach = std::min(reach, n / 2);
    int d = base.dim();
    std::array<int, max_dim> off{};
    double r2 = r * r * (1 + 1e-12);
    for (off[0] = -reach; off[0] <= reach; ++off[0])
        for (off[1] = d > 1 ? -reach : 0; off[1] <= (d > 1 ? reach : 0); ++off[1])
            for (off[2] = d > 2 ? -reach : 0; off[2] <= (d > 2 ? reach : 0); ++off[2]) {
                double s = 0;
                for (int a = 0; a < d; ++a) s += off[a] * h * off[a] * h;
                if (s > r2) continue;
                std::array<int, max_dim> j{};
                for (int a = 0; a < d; ++a) j[a] = c[a] + off[a];
                out.push_back(base.ravel(j));
            }
    return out;
}

}  // namespace

double parabolic_maximal(const BaseFunction& f, std::size_t point, std::size_t frame, std::span<const double> radii) {
    if (f.values.size() != f.times.size()) throw std::invalid_argument("base function frames and times differ");
    if (frame >= f.times.size() || point >= f.base.size()) throw std::out_of_range("maximal point out of range");
    int n = f.base.dim();
    double t = f.times[frame];
    double best = 0.0;
    bool any = false;
    for (double r : radii) {
        if (!(r > 0.0) || r > 0.5 * f.base.extent() + 1e-12) throw std::invalid_argument("radius outside (0, L/2]");
        double lo = t - r * r, hi = t + r * r;
        double tol = 1e-9 * std::max(1.0, std::abs(t));
        if (lo < f.times.front() - tol || hi > f.times.back() + tol) continue;
        auto w = time_weights(f.times, lo, hi);
        auto ball = periodic_ball(f.base, point, r);
        double s = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (w[k] == 0.0) continue;
            double inner = 0.0;
            for (auto i : ball) inner += f.values[k][i];
            s += w[k] * inner;
        }
        double val = std::pow(r, -n - 2) * s * f.base.cell_volume();
        best = any ? std::max(best, val) : val;
        any = true;
    }
    return best;
}

std::vector<double> dyadic_radii(double r_max, double spacing) {
    std::vector<double> r;
    for (double x = r_max; x >= 2.0 * spacing * (1 - 1e-12); x *= 0.5) r.push_back(x);
    if (r.empty()) throw std::invalid_argument("r_max is below two grid spacings");
    return r;
}

std::size_t GoodBadPartition::count(CellState s) const {
    std::size_t c = 0;
    for (const auto& row : state)
        for (auto x : row) c += x == s ? 1 : 0;
    return c;
}

GoodBadPartition partition_good_bad(const Trajectory& tr, double l, double b, const ParabolicCylinder& cyl) {
    if (!(l > 0.0)) throw std::invalid_argument("threshold l must be positive");
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("level band b must lie in (0,1)");
    const auto& g = tr.grid();
    int n = g.dim() - 1;
    double R = cyl.radius;
    auto times = tr.times();

    GoodBadPartition p;
    p.l = l;
    p.b = b;
    p.cylinder = cyl;
    p.cells = ball_indices(g, cyl.center, R);
    auto w = time_weights(times, cyl.center_time - R * R, cyl.center_time + R * R);
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0) p.frames.push_back(k);

    auto radii = dyadic_radii(R, g.spacing());
    // frames any cylinder can touch
    double reach = R * R + radii.front() * radii.front();
    std::size_t k_lo = tr.size(), k_hi = 0;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        if (times[k] < times[p.frames.front()] - reach - tr.sample_interval()) continue;
        if (times[k] > times[p.frames.back()] + reach + tr.sample_interval()) continue;
        k_lo = std::min(k_lo, k);
        k_hi = std::max(k_hi, k);
    }

    auto tr_fft = SpectralTransform::get(g);
    Vec e = unit_axis(g.vertical_axis());
    std::vector<std::vector<std::complex<double>>> spectra;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const auto& u = tr.frame(k);
        auto d = derivatives(u);
        std::vector<double> tilt(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            double g2 = d.gradient_norm2[i];
            if (std::sqrt(g2) <= d.gradient_floor) continue;
            double ge = d.gradient[g.vertical_axis()][i] * e[g.vertical_axis()];
            tilt[i] = std::max(0.0, u.epsilon() * (g2 - ge * ge));
        }
        spectra.push_back(tr_fft->forward(tilt));
    }

    p.maximal.assign(p.frames.size(), std::vector<double>(p.cells.size(), 0.0));
    double dv = g.cell_volume();
    for (double r : radii) {
        std::vector<double> ball(g.size(), 0.0);
        for (auto i : ball_indices(g, Vec{}, r)) ball[i] = 1.0;
        // shift so the ball is centered on lattice index 0
        std::vector<double> kernel(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (ball[i] == 0.0) continue;
            auto idx = g.unravel(i);
            for (int a = 0; a < g.dim(); ++a) idx[a] -= g.points() / 2;
            kernel[g.ravel(idx)] = 1.0;
        }
        auto kspec = tr_fft->forward(kernel);
        std::vector<std::vector<double>> local;  // per stored frame, values at the cells
        for (const auto& sp : spectra) {
            auto prod = sp;
            for (std::size_t s = 0; s < prod.size(); ++s) prod[s] *= kspec[s] * dv;
            auto conv = tr_fft->inverse(std::move(prod));
            std::vector<double> at(p.cells.size());
            for (std::size_t c = 0; c < p.cells.size(); ++c) at[c] = conv[p.cells[c]];
            local.push_back(std::move(at));
        }
        for (std::size_t slot = 0; slot < p.frames.size(); ++slot) {
            double t = times[p.frames[slot]];
            double tol = 1e-9 * std::max(1.0, std::abs(t));
            if (t - r * r < times.front() - tol || t + r * r > times.back() + tol) continue;
            auto wr = time_weights(times, t - r * r, t + r * r);
            for (std::size_t c = 0; c < p.cells.size(); ++c) {
                double s = 0.0;
                for (std::size_t k = k_lo; k <= k_hi; ++k)
                    if (wr[k] != 0.0) s += wr[k] * local[k - k_lo][c];
                p.maximal[slot][c] = std::max(p.maximal[slot][c], std::pow(r, -n - 2) * s);
            }
        }
    }

    p.state.assign(p.frames.size(), std::vector<CellState>(p.cells.size(), CellState::outside));
    for (std::size_t slot = 0; slot < p.frames.size(); ++slot) {
        const auto& u = tr.frame(p.frames[slot]);
        for (std::size_t c = 0; c < p.cells.size(); ++c) {
            if (std::abs(u[p.cells[c]]) >= 1.0 - b) continue;
            p.state[slot][c] = p.maximal[slot][c] < l ? CellState::good : CellState::bad;
        }
    }
    return p;
}

GoodBadPartition rethreshold(const GoodBadPartition& p, double l) {
    if (!(l > 0.0)) throw std::invalid_argument("threshold l must be positive");
    GoodBadPartition q = p;
    q.l = l;
    for (std::size_t slot = 0; slot < q.state.size(); ++slot)
        for (std::size_t c = 0; c < q.cells.size(); ++c) {
            if (q.state[slot][c] == CellState::outside) continue;
            q.state[slot][c] = q.maximal[slot][c] < l ? CellState::good : CellState::bad;
        }
    return q;
}

double weak_l1_ratio(const Trajectory& tr, const GoodBadPartition& p) {
    const auto& g = tr.grid();
    int n = g.dim() - 1;
    const auto& cyl = p.cylinder;
    double R = cyl.radius;
    auto w = time_weights(tr.times(), cyl.center_time - R * R, cyl.center_time + R * R);
    double bad = 0.0;
    for (std::size_t slot = 0; slot < p.frames.size(); ++slot) {
        std::size_t k = p.frames[slot];
        const auto& u = tr.frame(k);
        auto d = derivatives(u);
        double s = 0.0;
        for (std::size_t c = 0; c < p.cells.size(); ++c)
            if (p.state[slot][c] == CellState::bad) s += u.epsilon() * d.gradient_norm2[p.cells[c]];
        bad += w[k] * s * g.cell_volume();
    }
    ParabolicCylinder big = cyl;
    big.radius = 2.0 * R;
    double tilt = tilt_excess(tr, unit_axis(g.vertical_axis()), Region::cylinder(big)) * std::pow(2.0 * R, n + 2);
    if (tilt <= 0.0) return 0.0;
    return bad * p.l / tilt;
}

double good_set_lipschitz(const Trajectory& tr, const GoodBadPartition& p, double s) {
    const auto& g = tr.grid();
    if (g.dim() < 2) throw std::invalid_argument("graph slopes need dim >= 2");
    std::vector<int> slot_of(g.size(), -1);
    for (std::size_t c = 0; c < p.cells.size(); ++c) slot_of[p.cells[c]] = static_cast<int>(c);
    std::vector<ScalarField> frames;
    for (auto k : p.frames) frames.push_back(tr.frame(k));
    // frames are consecutive, so the sub-trajectory keeps the sampling interval
    Trajectory sub(std::move(frames), tr.sample_interval());
    auto graph = extract_graph(sub, s);
    int v = g.vertical_axis();
    double best = 0.0;
    for (std::size_t slot = 0; slot < p.frames.size(); ++slot) {
        for (std::size_t b = 0; b < graph.base_size(); ++b) {
            if (!graph.valid[slot][b]) continue;
            auto idx = g.unravel(b * g.points());
            idx[v] = static_cast<int>(std::lround((graph.heights[slot][b] + 0.5 * g.extent()) / g.spacing()));
            int c = slot_of[g.ravel(idx)];
            if (c < 0 || p.state[slot][c] != CellState::good) continue;
            double slope2 = 0.0;
            bool ok = true;
            for (int a = 0; a < graph.base_dim; ++a) {
                auto d = base_derivative(graph, slot, b, a);
                if (!d) { ok = false; break; }
                slope2 += *d * *d;
            }
            if (ok) best = std::max(best, std::sqrt(slope2));
        }
    }
    return best;
}

HeatComparison heat_compare(const LevelSetGraph& graph, std::span<const double> h0, double t0,
                            std::optional<double> at_time) {
    if (graph.base_dim < 1) throw std::invalid_argument("heat comparison needs a base of dimension >= 1");
    if (h0.size() != graph.base_size()) throw std::invalid_argument("h0 does not match the graph's base lattice");
    if (graph.validity_fraction() < 0.95) throw std::runtime_error("graph is valid on fewer than 95% of base points");
    Grid base = graph.base_grid();
    double mean0 = 0.0;
    for (double x : h0) mean0 += x;
    mean0 /= h0.size();
    std::vector<double> ref0(h0.begin(), h0.end());
    for (auto& x : ref0) x -= mean0;
    ScalarField ref_field(base, ref0, 1.0, t0);

    HeatComparison out;
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t k = 0; k < graph.times.size(); ++k) {
        double t = graph.times[k];
        if (at_time && std::abs(t - *at_time) > 1e-9 * std::max(1.0, std::abs(t))) continue;
        if (t < t0 - 1e-12) continue;
        auto ref = heat_semigroup(ref_field, std::max(0.0, t - t0));
        double mean = 0.0;
        std::size_t cnt = 0;
        for (std::size_t b = 0; b < base.size(); ++b)
            if (graph.valid[k][b]) {
                mean += graph.heights[k][b];
                ++cnt;
            }
        if (cnt == 0) continue;
        mean /= cnt;
        double e2 = 0.0, r2 = 0.0;
        for (std::size_t b = 0; b < base.size(); ++b) {
            if (!graph.valid[k][b]) continue;
            double diff = graph.heights[k][b] - mean - ref[b];
            e2 += diff * diff;
            r2 += ref[b] * ref[b];
        }
        out.frame_times.push_back(t);
        out.frame_errors.push_back(r2 > 0 ? std::sqrt(e2 / r2) : std::sqrt(e2 / cnt));
        err2 += e2;
        ref2 += r2;
    }
    if (out.frame_times.empty()) throw std::invalid_argument("no graph frame matches the comparison time");
    out.relative_l2 = ref2 > 0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
    return out;
}

namespace {

// Solves the small symmetric system A x = y by Gaussian elimination with pivoting.
std::vector<double> solve_small(std::vector<std::vector<double>> A, std::vector<double> y) {
    std::size_t m = y.size();
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) < 1e-300) throw std::runtime_error("plane fit is degenerate");
        std::swap(A[c], A[piv]);
        std::swap(y[c], y[piv]);
        for (std::size_t r = c + 1; r < m; ++r) {
            double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < m; ++k) A[r][k] -= f * A[c][k];
            y[r] -= f * y[c];
        }
    }
    std::vector<double> x(m);
    for (std::size_t c = m; c-- > 0;) {
        double s = y[c];
        for (std::size_t k = c + 1; k < m; ++k) s -= A[c][k] * x[k];
        x[c] = s / A[c][c];
    }
    return x;
}

}  // namespace

ExcessDecayReport excess_decay_ratio(const Trajectory& tr, double theta, const ParabolicCylinder& cyl, double k1) {
    const auto& g = tr.grid();
    if (g.dim() < 2) throw std::invalid_argument("excess decay needs dim >= 2");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
    int n = g.dim() - 1;
    int v = g.vertical_axis();
    double R = cyl.radius;
    double eps = tr.epsilon();

    ParabolicCylinder small = cyl;
    small.radius = theta * R;
    Region inner = Region::cylinder(small);
    auto idx = ball_indices(g, cyl.center, small.radius);
    auto w = region_time_weights(tr, inner);

    // weighted least squares of y_v on (y^, 1)
    std::size_t m = n + 1;
    std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
    std::vector<double> rhs(m, 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] == 0.0) continue;
        auto d = derivatives(tr.frame(k));
        for (auto i : idx) {
            Vec x = g.position(i);
            double wt = w[k] * eps * d.gradient_norm2[i];
            std::vector<double> phi(m);
            for (int a = 0; a < n; ++a) phi[a] = x[a] - cyl.center[a];
            phi[n] = 1.0;
            double y = x[v] - cyl.center[v];
            for (std::size_t r = 0; r < m; ++r) {
                rhs[r] += wt * phi[r] * y;
                for (std::size_t c = 0; c < m; ++c) A[r][c] += wt * phi[r] * phi[c];
            }
        }
    }
    auto coef = solve_small(A, rhs);
    Vec normal{};
    double nn = 1.0;
    for (int a = 0; a < n; ++a) nn += coef[a] * coef[a];
    nn = std::sqrt(nn);
    for (int a = 0; a < n; ++a) normal[a] = -coef[a] / nn;
    normal[v] = 1.0 / nn;

    ExcessDecayReport r;
    r.plane = Hyperplane{normal, coef[n] / nn};
    r.theta = theta;
    r.k1 = k1;
    r.height_fit = height_excess(tr, r.plane, inner);
    r.height_unit = height_excess(tr, Hyperplane::horizontal(g), Region::cylinder(cyl));
    r.ratio = r.height_unit > 0.0 ? r.height_fit / r.height_unit : 0.0;
    r.layer_repulsion = r.height_unit * R * R / (eps * eps);
    Vec diff = normal;
    diff[v] -= 1.0;
    r.tilt_distance = norm(diff);
    r.tilt_constant = r.height_unit > 0.0 ? r.tilt_distance / std::sqrt(r.height_unit) : 0.0;
    r.k1_condition = r.layer_repulsion >= k1;
    r.decays = r.ratio <= 0.5 * theta;
    return r;
}

}  // namespace aclab
