#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sobolab/potentials.hpp"

using namespace sobolab;
using namespace sobolab::potentials;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double k = 2.0 * pi;

// Potential of the unit-density ball at distance d from its centre, as an
// integral over concentric shells: a shell of radius rho contributes
// 2 pi^2 rho (e^{-k|d-rho|} - e^{-k(d+rho)}) / (k d).
double shell_oracle(double R, double d) {
    auto shell = [d](double rho) {
        return 2.0 * pi * pi * rho * (std::exp(-k * std::abs(d - rho)) - std::exp(-k * (d + rho))) / (k * d);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    if (d < R) return GK::integrate(shell, 0.0, d, 10, 1e-15) + GK::integrate(shell, d, R, 10, 1e-15);
    return GK::integrate(shell, 0.0, R, 10, 1e-15);
}

}  // namespace

TEST(FundamentalSolution, KernelValues) {
    EXPECT_NEAR(fundamental_solution({1, 0, 0}, {0, 0, 0}), pi * std::exp(-k), 1e-16);
    EXPECT_NEAR(fundamental_solution({0, 0.5, 0}, {0, 0, 0.5}), pi * std::exp(-k * std::sqrt(0.5)) / std::sqrt(0.5), 1e-15);
    EXPECT_THROW(fundamental_solution({1, 2, 3}, {1, 2, 3}), DomainError);
}

TEST(BallPotential, ClosedFormMatchesShellIntegral) {
    for (double R : {0.5, 1.0, 2.0})
        for (double d : {0.05, 0.3, 0.99, 1.0, 1.01, 1.7, 3.0}) {
            const double oracle = shell_oracle(R, d * R);
            EXPECT_NEAR(ball_potential(R, d * R) / oracle, 1.0, 1e-12) << R << " " << d;
        }
}

TEST(BallPotential, CentreLimitAndInteriorBound) {
    // At the centre: 1 - (1 + kR) e^{-kR}; and 0 < Phi < 1 inside.
    for (double R : {0.3, 1.0}) {
        EXPECT_NEAR(ball_potential(R, 0.0), 1.0 - (1.0 + k * R) * std::exp(-k * R), 1e-13);
        for (double r = 0.0; r < R; r += 0.05 * R) {
            EXPECT_GT(ball_potential(R, r), 0.0);
            EXPECT_LT(ball_potential(R, r), 1.0);
        }
    }
}

TEST(NewtonPotential, QuadratureMatchesShellOracle) {
    BallSource ball;
    ball.radius = 1.0;
    ball.centre = {0.2, -0.1, 0.3};
    for (double d : {0.0, 0.4, 0.999, 1.0, 1.5, 2.5}) {
        const Point3 y{ball.centre[0] + d, ball.centre[1], ball.centre[2]};
        const double oracle = d == 0.0 ? ball_potential(1.0, 0.0) : shell_oracle(1.0, d);
        EXPECT_NEAR(newton_potential(ball, y).real() / oracle, 1.0, 1e-10) << d;
    }
}

TEST(NewtonPotential, RadialSourcesGiveRadialPotentials) {
    BallSource ball;
    ball.amplitude = Complex(0.5, 2.0);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    for (double r : {0.3, 1.0, 1.4}) {
        const Complex ref = newton_potential(ball, {0.0, 0.0, r});
        for (int i = 0; i < 10; ++i) {
            Point3 dir{g(rng), g(rng), g(rng)};
            const double n = std::hypot(dir[0], dir[1], dir[2]);
            const Complex v = newton_potential(ball, {r * dir[0] / n, r * dir[1] / n, r * dir[2] / n});
            EXPECT_LE(std::abs(v - ref) / std::abs(ref), 1e-8);
        }
    }
}

TEST(Pairing, ConstantDensityOnUnitBallExceedsOne) {
    const auto rep = appendix_pairing([](const Point3&) { return Complex(1.0, 0.0); }, BallSource{});
    // Oracle: 4 pi R^2 Phi(R) from the shell integral.
    const double oracle = 4.0 * pi * shell_oracle(1.0, 1.0);
    EXPECT_NEAR(rep.value.real() / oracle, 1.0, 1e-10);
    EXPECT_NEAR(rep.value.imag(), 0.0, 1e-14);
    EXPECT_GT(rep.value.real(), 1.0);
    EXPECT_LE(rep.relative_deviation, 1e-4);
}

TEST(Pairing, PositiveForNonnegativeDensities) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        const double a = u(rng), b = u(rng);
        BallSource ball;
        ball.radius = 0.5 + u(rng);
        const auto rep = appendix_pairing([a, b](const Point3& nu) { return Complex(a + b * nu[2] * nu[2], 0.0); }, ball,
                                          {16, 32}, {16, 32});
        EXPECT_GT(rep.value.real(), 0.0);
    }
}

TEST(Pairing, ZonalHarmonicsPairToZero) {
    const auto one = appendix_pairing([](const Point3&) { return Complex(1.0, 0.0); }, BallSource{});
    for (int l : {1, 2, 3}) {
        const auto rep = appendix_pairing(zonal_harmonic(l, {0.6, 0.0, 0.8}), BallSource{});
        EXPECT_LE(std::abs(rep.value) / std::abs(one.value), 1e-10) << l;
    }
}

TEST(GaussianPotential, ContinuousAtOriginAndMatchesPointSourceFarAway) {
    const double sigma = 0.15;
    EXPECT_NEAR(gaussian_potential(1e-9 * sigma, sigma), gaussian_potential(2e-8 * sigma, sigma), 1e-6);
    // Far from a narrow Gaussian the potential approaches F(r) e^{k^2 sigma^2 / 2}.
    const double r = 1.2;
    EXPECT_NEAR(gaussian_potential(r, sigma) / (pi * std::exp(-k * r) / r * std::exp(0.5 * k * k * sigma * sigma)), 1.0, 1e-6);
}

TEST(SpectralCrossCheck, TorusPotentialMatchesFreeSpaceKernel) {
    const auto rep = spectral_cross_check(32, 4.0, 0.25);
    EXPECT_GT(rep.probe_points, 0);
    EXPECT_LE(rep.max_relative_deviation, 1e-4);
}
