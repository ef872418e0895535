#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "aclab/field.hpp"

namespace aclab {

// Real-to-complex FFT on a periodic grid. The spectrum uses the half layout
// (N, ..., N, N/2 + 1). Instances are shared per (dim, N, L) and are safe to
// use from several threads.
class SpectralTransform {
public:
    static std::shared_ptr<const SpectralTransform> get(const Grid& grid);

    explicit SpectralTransform(const Grid& grid);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    const Grid& grid() const { return grid_; }
    std::size_t spectrum_size() const { return spectrum_size_; }

    void forward(const double* in, std::complex<double>* out) const;
    // Destroys `in`. Output is normalized, so inverse(forward(f)) == f.
    void inverse(std::complex<double>* in, double* out) const;

    std::vector<std::complex<double>> forward(std::span<const double> in) const;
    std::vector<double> inverse(std::vector<std::complex<double>> spectrum) const;

    // Wavenumber along `axis` for spectral index s; zero on the Nyquist plane,
    // which is what first derivatives want.
    double derivative_wavenumber(int axis, std::size_t s) const { return kd_[axis * spectrum_size_ + s]; }
    // |k|^2 including Nyquist modes.
    double k_squared(std::size_t s) const { return k2_[s]; }

private:
    Grid grid_;
    std::size_t spectrum_size_;
    std::vector<double> kd_;
    std::vector<double> k2_;
    void* forward_plan_;
    void* inverse_plan_;
    void* aligned_forward_ = nullptr;
    void* aligned_inverse_ = nullptr;
};

double wavenumber(const Grid& grid, int index);

ScalarField partial_derivative(const ScalarField& f, int axis);
std::vector<ScalarField> gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);

// Solves (I - a Lap) v = rhs exactly; a >= 0.
ScalarField solve_shifted_laplacian(const ScalarField& rhs, double a);
// e^{t Lap} f
ScalarField heat_semigroup(const ScalarField& f, double t);

// Periodic convolution sum_y f(x - y) g(y) h^dim of two lattice functions.
std::vector<double> periodic_convolution(const Grid& grid, std::span<const double> f, std::span<const double> g);

}  // namespace aclab
