#pragma once

// Screened Newton potential in R^3 for the operator 1 - Delta / (4 pi^2),
// whose fundamental solution is F(x, y) = pi exp(-2 pi |x - y|) / |x - y|,
// and the boundary pairing of the potential of a ball source.

#include <array>
#include <functional>

#include "sobolab/common.hpp"

namespace sobolab::potentials {

using Point3 = std::array<double, 3>;

/// pi exp(-2 pi r) / r; DomainError for x = y.
double fundamental_solution(const Point3& x, const Point3& y);

/// Constant density on a ball.
struct BallSource {
    double radius = 1.0;
    Complex amplitude{1.0, 0.0};
    Point3 centre{0.0, 0.0, 0.0};
};

struct QuadratureOrders {
    int radial = 32;
    int angular = 64;
};

/// \int_B F(x, y) f dx by a product rule in spherical coordinates about y:
/// the r^2 Jacobian cancels the kernel singularity, the radial integral runs
/// over the chord through the ball and the polar angle is measured from the
/// direction of the centre, with a square-root substitution at the tangent cone.
Complex newton_potential(const BallSource& f, const Point3& y, const QuadratureOrders& orders = {});

/// Closed-form radial solution of (1 - Delta / 4 pi^2) Phi = chi_B for the
/// unit-amplitude ball, at distance r from the centre.
double ball_potential(double radius, double r);

/// Density on the sphere, as a function of the unit normal.
using SphereDensity = std::function<Complex(const Point3& unit_normal)>;

struct SurfaceOrders {
    /// Gauss-Legendre nodes in cos(theta).
    int polar = 32;
    /// Trapezoidal nodes in phi.
    int azimuthal = 64;
};

struct PairingReport {
    Complex value{};
    /// Phi(R) times the integral of v, from the closed form.
    Complex oracle{};
    double relative_deviation = 0.0;
    QuadratureOrders volume_orders{};
    SurfaceOrders surface_orders{};
};

/// \int_{|x - c| = R} v(nu) Phi(x) dS with Phi the Newton potential of f.
PairingReport appendix_pairing(const SphereDensity& v, const BallSource& f, const QuadratureOrders& volume = {},
                               const SurfaceOrders& surface = {});

/// Real spherical harmonic of degree l, order 0 (Legendre polynomial of the
/// polar cosine); used as a density orthogonal to constants.
SphereDensity zonal_harmonic(int degree, const Point3& axis = {0.0, 0.0, 1.0});

struct SpectralCrossCheck {
    /// max over probe points of |torus - free space| / |free space|.
    double max_relative_deviation = 0.0;
    int probe_points = 0;
    std::size_t grid_points = 0;
    double extent = 0.0;
    double gaussian_width = 0.0;
};

/// Convolves a normalized Gaussian of width sigma with F in closed form
/// (summing periodic images of the neighbouring cells) and compares it with
/// the Bessel potential of order -2 of the sampled Gaussian on a periodic
/// cube, at probe points between 0.5 and 1.5 from the source.
SpectralCrossCheck spectral_cross_check(std::size_t points = 64, double extent = 4.0, double sigma = 0.15);

/// (F * g)(r) for the normalized Gaussian g of width sigma, in closed form.
double gaussian_potential(double r, double sigma);

}  // namespace sobolab::potentials
