#pragma once

// Periodic-grid realization of H^s(R^n): fields sampled on a torus that is
// large enough for the field to decay at the box boundary, with Fourier
// coefficients under the convention g^(xi) = \int e^{-2 pi i x.xi} g(x) dx.
// Discrete frequencies are xi_j = j / L, so multiplier symbols carry no 2 pi.

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <vector>

#include "sobolab/common.hpp"

namespace sobolab::spectral {

struct GridSpec {
    int dimension = 1;
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    std::array<std::size_t, 3> points{1, 1, 1};
    int components = 1;

    /// Validating constructor; throws DomainError on bad input.
    static GridSpec make(std::span<const double> extents, std::span<const std::size_t> points,
                         int components = 1);
    static GridSpec cube(int dimension, double extent, std::size_t points, int components = 1);

    std::size_t point_count() const { return points[0] * points[1] * points[2]; }
    std::size_t value_count() const { return point_count() * static_cast<std::size_t>(components); }
    double spacing(int axis) const { return extent[axis] / static_cast<double>(points[axis]); }
    double cell_volume() const;
    /// Quadrature weight of one discrete frequency: 1 / prod L_k.
    double frequency_weight() const;
    /// Sample coordinate x_j = -L/2 + j L / N, so the origin is the sample j = N/2.
    double coordinate(int axis, std::size_t j) const {
        return -0.5 * extent[axis] + static_cast<double>(j) * spacing(axis);
    }
    /// Signed frequency index for FFT-ordered slot k, in [-N/2, N/2).
    long signed_index(int axis, std::size_t k) const {
        const auto n = static_cast<long>(points[axis]);
        const auto kk = static_cast<long>(k);
        return kk < n / 2 ? kk : kk - n;
    }
    double frequency(int axis, std::size_t k) const {
        return static_cast<double>(signed_index(axis, k)) / extent[axis];
    }
    /// Multi-index of the flat point index p (row-major, last axis fastest).
    std::array<std::size_t, 3> unflatten(std::size_t p) const;
    std::size_t flatten(const std::array<std::size_t, 3>& idx) const {
        return (idx[0] * points[1] + idx[1]) * points[2] + idx[2];
    }
    /// Slot of the frequency -xi for the FFT-ordered slot k (Nyquist maps to itself).
    std::size_t negated_slot(int axis, std::size_t k) const {
        return k == 0 ? 0 : points[axis] - k;
    }

    bool operator==(const GridSpec& other) const = default;
};

/// An m-component complex field on a periodic grid with lazily cached Fourier
/// coefficients. Storage is point-major with the component index innermost,
/// identical for samples and coefficients (coefficients in FFT order).
class SpectralField {
public:
    SpectralField() = default;
    static SpectralField from_values(const GridSpec& grid, std::vector<Complex> values);
    static SpectralField from_fourier(const GridSpec& grid, std::vector<Complex> coefficients);
    static SpectralField zeros(const GridSpec& grid);
    /// Samples fn(x, component) at every grid point.
    static SpectralField sample(const GridSpec& grid,
                                const std::function<Complex(std::span<const double>, int)>& fn);

    SpectralField(const SpectralField& other);
    SpectralField& operator=(const SpectralField& other);
    SpectralField(SpectralField&& other) noexcept;
    SpectralField& operator=(SpectralField&& other) noexcept;
    ~SpectralField() = default;

    const GridSpec& grid() const { return grid_; }
    std::span<const Complex> values() const;
    std::span<const Complex> fourier() const;

    /// Replaces the samples and drops the cached coefficients.
    void assign_values(std::vector<Complex> values);

    std::array<double, 3> point(std::size_t p) const;
    std::array<double, 3> frequency(std::size_t p) const;
    double frequency_norm_squared(std::size_t p) const;

private:
    SpectralField(const GridSpec& grid, std::vector<Complex> data, bool is_fourier);

    GridSpec grid_{};
    mutable std::vector<Complex> values_;
    mutable std::vector<Complex> fourier_;
    mutable bool have_values_ = false;
    mutable bool have_fourier_ = false;
    mutable std::unique_ptr<std::mutex> cache_mutex_ = std::make_unique<std::mutex>();
};

/// Symbol of a Fourier multiplier: for each frequency xi writes an m x m
/// complex matrix (row-major) into the output span.
struct FourierMultiplier {
    std::function<void(std::span<const double> xi, std::span<Complex> matrix)> symbol;

    /// Scalar multiple of identity, sym(xi) * I.
    static FourierMultiplier scalar(std::function<Complex(std::span<const double>)> sym);
    /// Bessel potential (1 + |xi|^2)^{t/2} I.
    static FourierMultiplier bessel(double t);
};

SpectralField apply_multiplier(const SpectralField& u, const FourierMultiplier& multiplier);

/// J^t u: multiplies the coefficients by (1 + |xi|^2)^{t/2}.
SpectralField bessel_potential(const SpectralField& u, double t);

/// ||u||_{H^s} = sqrt(sum_xi w (1+|xi|^2)^s |u^(xi)|^2) with w = 1/prod L_k.
double sobolev_norm(const SpectralField& u, double s);

/// (u, v)_{H^s}: conjugate-linear in u.
Complex sobolev_inner(const SpectralField& u, const SpectralField& v, double s);

/// Bilinear pairing <u, v> = \int u^(-xi) . v^(xi) dxi, summed over components.
Complex dual_product(const SpectralField& u, const SpectralField& v);

/// Sample-space L2 norm sqrt(h^n sum |u_j|^2).
double sample_l2_norm(const SpectralField& u);

SpectralField conjugate(const SpectralField& u);
SpectralField scaled(const SpectralField& u, Complex alpha);
/// alpha * u + v, computed on samples.
SpectralField axpy(Complex alpha, const SpectralField& u, const SpectralField& v);
/// Pointwise product with a scalar function sampled on the same grid.
SpectralField multiply_pointwise(const SpectralField& u, std::span<const Complex> scalar_samples);
/// Sup over samples of the componentwise modulus.
double sup_norm(const SpectralField& u);

struct RestrictResult {
    SpectralField field;
    bool region_empty = false;
};

/// Zeroes samples outside the region; region_empty flags a region with no sample.
RestrictResult restrict_support(const SpectralField& u,
                                const std::function<bool(std::span<const double>)>& inside);

/// Fraction of the sample energy lying within `layer` (fraction of the
/// extent) of the box faces. Fields meant to stand in for functions on R^n
/// should report a value below ~1e-20.
double tail_energy_fraction(const SpectralField& u, double layer = 1.0 / 16.0);

void require_same_grid(const SpectralField& u, const SpectralField& v);

/// Complex Gaussian coefficients on |xi| <= max_frequency (Nyquist slots
/// excluded), zero elsewhere.
SpectralField random_band_limited(const GridSpec& grid, std::mt19937_64& rng, double max_frequency);

// Serialization: binary container and 1D CSV slices.
void write_binary(const SpectralField& u, std::ostream& out);
SpectralField read_binary(std::istream& in);
/// Line through the origin along `axis`; columns x, then re/im per component.
void write_csv_slice(const SpectralField& u, std::ostream& out, int axis = 0);

}  // namespace sobolab::spectral
