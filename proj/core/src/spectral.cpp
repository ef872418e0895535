#include "aclab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace aclab {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double wavenumber(const Grid& grid, int index) {
    int n = grid.points();
    int m = index <= n / 2 ? index : index - n;
    return 2.0 * std::numbers::pi / grid.extent() * m;
}

std::shared_ptr<const SpectralTransform> SpectralTransform::get(const Grid& grid) {
    using Key = std::tuple<int, int, double>;
    static std::map<Key, std::shared_ptr<const SpectralTransform>> cache;
    static std::mutex cache_mutex;
    Key key{grid.dim(), grid.points(), grid.extent()};
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const SpectralTransform>(grid);
    // keep the cache small; big grids are few
    if (cache.size() > 32) cache.clear();
    cache.emplace(key, t);
    return t;
}

SpectralTransform::SpectralTransform(const Grid& grid) : grid_(grid) {
    int d = grid.dim();
    int n = grid.points();
    int half = n / 2 + 1;
    spectrum_size_ = 1;
    for (int a = 0; a < d - 1; ++a) spectrum_size_ *= n;
    spectrum_size_ *= half;

    kd_.assign(static_cast<std::size_t>(d) * spectrum_size_, 0.0);
    k2_.assign(spectrum_size_, 0.0);
    for (std::size_t s = 0; s < spectrum_size_; ++s) {
        std::size_t rest = s;
        double k2 = 0.0;
        for (int a = d - 1; a >= 0; --a) {
            int len = a == d - 1 ? half : n;
            int j = static_cast<int>(rest % len);
            rest /= len;
            double k = wavenumber(grid, j);
            if (j == n / 2) {
                k = 2.0 * std::numbers::pi / grid.extent() * (n / 2);
                kd_[a * spectrum_size_ + s] = 0.0;
            } else {
                kd_[a * spectrum_size_ + s] = k;
            }
            k2 += k * k;
        }
        k2_[s] = k2;
    }

    int dims[max_dim] = {n, n, n};
    std::vector<double> real(grid.size());
    std::vector<std::complex<double>> cplx(spectrum_size_);
    auto* rp = real.data();
    auto* cp = reinterpret_cast<fftw_complex*>(cplx.data());
    std::lock_guard lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_r2c(d, dims, rp, cp, FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse_plan_ = fftw_plan_dft_c2r(d, dims, cp, rp, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("FFTW planning failed");
    // SIMD plans for arrays with the usual malloc alignment, which is nearly all of them
    if (fftw_alignment_of(rp) == 0 && fftw_alignment_of(reinterpret_cast<double*>(cp)) == 0) {
        aligned_forward_ = fftw_plan_dft_r2c(d, dims, rp, cp, FFTW_ESTIMATE);
        aligned_inverse_ = fftw_plan_dft_c2r(d, dims, cp, rp, FFTW_ESTIMATE);
    }
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    if (aligned_forward_) fftw_destroy_plan(static_cast<fftw_plan>(aligned_forward_));
    if (aligned_inverse_) fftw_destroy_plan(static_cast<fftw_plan>(aligned_inverse_));
}

namespace {

bool aligned(const void* a, const void* b) {
    return fftw_alignment_of(const_cast<double*>(static_cast<const double*>(a))) == 0 &&
           fftw_alignment_of(const_cast<double*>(static_cast<const double*>(b))) == 0;
}

}  // namespace

void SpectralTransform::forward(const double* in, std::complex<double>* out) const {
    // out-of-place r2c leaves the input alone
    void* plan = aligned_forward_ && aligned(in, out) ? aligned_forward_ : forward_plan_;
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan), const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void SpectralTransform::inverse(std::complex<double>* in, double* out) const {
    void* plan = aligned_inverse_ && aligned(in, out) ? aligned_inverse_ : inverse_plan_;
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan), reinterpret_cast<fftw_complex*>(in), out);
    double scale = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) out[i] *= scale;
}

std::vector<std::complex<double>> SpectralTransform::forward(std::span<const double> in) const {
    if (in.size() != grid_.size()) throw std::invalid_argument("input size does not match transform grid");
    std::vector<std::complex<double>> out(spectrum_size_);
    forward(in.data(), out.data());
    return out;
}

std::vector<double> SpectralTransform::inverse(std::vector<std::complex<double>> spectrum) const {
    if (spectrum.size() != spectrum_size_) throw std::invalid_argument("spectrum size does not match transform");
    std::vector<double> out(grid_.size());
    inverse(spectrum.data(), out.data());
    return out;
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
    if (axis < 0 || axis >= f.grid().dim()) throw std::out_of_range("derivative axis out of range");
    auto tr = SpectralTransform::get(f.grid());
    auto spec = tr->forward(f.values());
    for (std::size_t s = 0; s < spec.size(); ++s)
        spec[s] *= std::complex<double>(0.0, tr->derivative_wavenumber(axis, s));
    return f.with_values(tr->inverse(std::move(spec)));
}

std::vector<ScalarField> gradient(const ScalarField& f) {
    auto tr = SpectralTransform::get(f.grid());
    auto spec = tr->forward(f.values());
    std::vector<ScalarField> out;
    out.reserve(f.grid().dim());
    for (int a = 0; a < f.grid().dim(); ++a) {
        auto g = spec;
        for (std::size_t s = 0; s < g.size(); ++s) g[s] *= std::complex<double>(0.0, tr->derivative_wavenumber(a, s));
        out.push_back(f.with_values(tr->inverse(std::move(g))));
    }
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    auto tr = SpectralTransform::get(f.grid());
    auto spec = tr->forward(f.values());
    for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= -tr->k_squared(s);
    return f.with_values(tr->inverse(std::move(spec)));
}

ScalarField solve_shifted_laplacian(const ScalarField& rhs, double a) {
    if (!(a >= 0.0)) throw std::invalid_argument("shift coefficient must be non-negative");
    auto tr = SpectralTransform::get(rhs.grid());
    auto spec = tr->forward(rhs.values());
    for (std::size_t s = 0; s < spec.size(); ++s) spec[s] /= 1.0 + a * tr->k_squared(s);
    return rhs.with_values(tr->inverse(std::move(spec)));
}

ScalarField heat_semigroup(const ScalarField& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat time must be non-negative");
    auto tr = SpectralTransform::get(f.grid());
    auto spec = tr->forward(f.values());
    for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= std::exp(-t * tr->k_squared(s));
    return f.with_values(tr->inverse(std::move(spec)));
}

std::vector<double> periodic_convolution(const Grid& grid, std::span<const double> f, std::span<const double> g) {
    auto tr = SpectralTransform::get(grid);
    auto a = tr->forward(f);
    auto b = tr->forward(g);
    double dv = grid.cell_volume();
    for (std::size_t s = 0; s < a.size(); ++s) a[s] *= b[s] * dv;
    return tr->inverse(std::move(a));
}

}  // namespace aclab
