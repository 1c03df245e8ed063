#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sobolab/spectral.hpp"

using namespace sobolab;
using namespace sobolab::spectral;

namespace {

constexpr double pi = std::numbers::pi;

SpectralField gaussian(const GridSpec& grid) {
    return SpectralField::sample(grid, [](std::span<const double> x, int) {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        return Complex(std::exp(-pi * r2), 0.0);
    });
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(GridSpec, RejectsOddOrTinyGrids) {
    EXPECT_THROW(GridSpec::cube(1, 1.0, 3), DomainError);
    EXPECT_THROW(GridSpec::cube(1, 1.0, 2), DomainError);
    EXPECT_THROW(GridSpec::cube(1, -1.0, 8), DomainError);
    EXPECT_THROW(GridSpec::cube(4, 1.0, 8), DomainError);
    EXPECT_NO_THROW(GridSpec::cube(3, 2.0, 8));
}

TEST(GridSpec, FrequenciesAreIndexOverExtent) {
    const auto g = GridSpec::cube(1, 4.0, 8);
    EXPECT_DOUBLE_EQ(g.frequency(0, 1), 0.25);
    EXPECT_DOUBLE_EQ(g.frequency(0, 4), -1.0);
    EXPECT_DOUBLE_EQ(g.frequency(0, 7), -0.25);
    EXPECT_DOUBLE_EQ(g.coordinate(0, 4), 0.0);
}

// The Gaussian e^{-pi x^2} is its own transform, so its H^s norm is
// \int (1 + xi^2)^s e^{-2 pi xi^2} d xi, computed here by adaptive quadrature.
TEST(SobolevNorm, GaussianMatchesQuadratureOracle) {
    const auto u = gaussian(GridSpec::cube(1, 16.0, 256));
    for (double s : {-1.5, -0.5, 0.0, 0.7, 1.0, 2.5}) {
        const double exact = std::sqrt(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [s](double xi) { return std::pow(1.0 + xi * xi, s) * std::exp(-2.0 * pi * xi * xi); },
            -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-14));
        EXPECT_LT(relative(sobolev_norm(u, s), exact), 1e-12) << "s = " << s;
    }
}

TEST(SobolevNorm, ParsevalOnRandomFields) {
    std::mt19937_64 rng(101);
    for (int dim = 1; dim <= 3; ++dim) {
        const auto grid = GridSpec::cube(dim, 6.0, dim == 3 ? 16 : 64, dim == 2 ? 2 : 1);
        for (int k = 0; k < (dim == 3 ? 10 : 45); ++k) {
            const auto u = random_band_limited(grid, rng, 2.0);
            EXPECT_LT(relative(sobolev_norm(u, 0.0), sample_l2_norm(u)), 1e-12);
        }
    }
}

TEST(BesselPotential, IsAnIsometryAndAGroup) {
    std::mt19937_64 rng(7);
    const auto grid = GridSpec::cube(2, 8.0, 64);
    for (int k = 0; k < 10; ++k) {
        const auto u = random_band_limited(grid, rng, 3.0);
        for (double s : {-2.0, -0.5, 0.7, 1.5}) {
            EXPECT_LT(relative(sobolev_norm(bessel_potential(u, s), 0.0), sobolev_norm(u, s)), 1e-12);
            for (double t : {-1.0, 0.3}) {
                const auto lhs = bessel_potential(bessel_potential(u, s), t);
                const auto rhs = bessel_potential(u, s + t);
                EXPECT_LT(sobolev_norm(axpy(-1.0, lhs, rhs), 0.0), 1e-12 * sobolev_norm(rhs, 0.0));
            }
        }
    }
}

TEST(SobolevNorm, MonotoneInIndex) {
    std::mt19937_64 rng(3);
    const auto grid = GridSpec::cube(1, 8.0, 128);
    for (int k = 0; k < 20; ++k) {
        const auto u = random_band_limited(grid, rng, 5.0);
        double previous = 0.0;
        for (double s = -2.0; s <= 2.0; s += 0.25) {
            const double n = sobolev_norm(u, s);
            EXPECT_GE(n, previous);
            previous = n;
        }
    }
}

TEST(SpectralField, FourierRoundTrip) {
    std::mt19937_64 rng(5);
    const auto grid = GridSpec::cube(2, 4.0, 32, 2);
    const auto u = random_band_limited(grid, rng, 3.0);
    const auto back = SpectralField::from_values(grid, {u.values().begin(), u.values().end()});
    double worst = 0.0;
    for (std::size_t i = 0; i < back.fourier().size(); ++i)
        worst = std::max(worst, std::abs(back.fourier()[i] - u.fourier()[i]));
    EXPECT_LT(worst, 1e-12 * sup_norm(u) * 64);
}

TEST(SpectralField, AssignValuesInvalidatesCoefficients) {
    const auto grid = GridSpec::cube(1, 1.0, 8);
    auto u = SpectralField::zeros(grid);
    EXPECT_EQ(u.fourier()[0], Complex(0.0, 0.0));
    u.assign_values(std::vector<Complex>(8, Complex(1.0, 0.0)));
    EXPECT_NEAR(u.fourier()[0].real(), 1.0, 1e-15);
}

TEST(DualProduct, GaussianPairing) {
    // <u, u> = \int e^{-2 pi xi^2} = 1 / sqrt(2) in one dimension.
    const auto u = gaussian(GridSpec::cube(1, 16.0, 256));
    EXPECT_NEAR(dual_product(u, u).real(), 1.0 / std::sqrt(2.0), 1e-13);
}

TEST(SpectralField, TailDiagnosticSeparatesDecayingFields) {
    const auto grid = GridSpec::cube(1, 16.0, 256);
    EXPECT_LT(tail_energy_fraction(gaussian(grid)), 1e-20);
    const auto flat = SpectralField::sample(grid, [](std::span<const double>, int) { return Complex(1.0, 0.0); });
    EXPECT_GT(tail_energy_fraction(flat), 0.1);
}

TEST(SpectralField, BinaryRoundTrip) {
    std::mt19937_64 rng(17);
    const auto u = random_band_limited(GridSpec::cube(2, 3.0, 16, 2), rng, 2.0);
    std::stringstream buf;
    write_binary(u, buf);
    const auto v = read_binary(buf);
    ASSERT_EQ(v.grid(), u.grid());
    for (std::size_t i = 0; i < u.values().size(); ++i) EXPECT_EQ(v.values()[i], u.values()[i]);
}

TEST(SpectralField, MismatchedGridsAreRejected) {
    const auto a = SpectralField::zeros(GridSpec::cube(1, 1.0, 8));
    const auto b = SpectralField::zeros(GridSpec::cube(1, 1.0, 16));
    EXPECT_THROW(axpy(1.0, a, b), GridMismatch);
}
