#include "sobolab/potentials.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "sobolab/spectral.hpp"

namespace sobolab::potentials {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double k = 2.0 * pi;

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1] from the Legendre zeros.
Rule gauss_legendre(int n) {
    if (n < 1) throw DomainError("quadrature order must be positive");
    Rule rule;
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    auto add = [&](double x) {
        const double dp = boost::math::legendre_p_prime(n, x);
        rule.nodes.push_back(x);
        rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    };
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
        if (*it != 0.0) add(-*it);
    for (double z : zeros) add(z);
    return rule;
}

// Maps a rule on [-1, 1] to [a, b].
template <typename F>
double integrate(const Rule& rule, double a, double b, F&& f) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * acc.value();
}

double norm3(const Point3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

double fundamental_solution(const Point3& x, const Point3& y) {
    const double r = norm3({x[0] - y[0], x[1] - y[1], x[2] - y[2]});
    if (r == 0.0) throw DomainError("fundamental solution is singular at x = y");
    return pi * std::exp(-k * r) / r;
}

double ball_potential(double radius, double r) {
    if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
    r = std::abs(r);
    const double kr = k * r, kR = k * radius;
    if (r < radius) {
        // (1 + kR) e^{-kR} sinh(kr) / (kr), written without overflow
        const double ratio = r == 0.0 ? 1.0 : 0.5 * (1.0 - std::exp(-2.0 * kr)) / kr;
        return 1.0 - (1.0 + kR) * std::exp(-k * (radius - r)) * ratio;
    }
    // (kR cosh kR - sinh kR) e^{-kr} / (kr)
    const double front = 0.5 * ((kR - 1.0) + (kR + 1.0) * std::exp(-2.0 * kR));
    return front * std::exp(-k * (r - radius)) / kr;
}

Complex newton_potential(const BallSource& f, const Point3& y, const QuadratureOrders& orders) {
    if (!(f.radius > 0.0)) throw DomainError("ball radius must be positive");
    const double R = f.radius;
    double d = norm3({y[0] - f.centre[0], y[1] - f.centre[1], y[2] - f.centre[2]});
    if (std::abs(d - R) <= 1e-12 * R) d = R;

    const Rule radial = gauss_legendre(orders.radial);
    const Rule angular = gauss_legendre(orders.angular);
    // \int_{r1}^{r2} pi r e^{-kr} dr: the r^2 Jacobian against the 1/r kernel.
    auto chord = [&](double r1, double r2) {
        if (r2 <= r1) return 0.0;
        return integrate(radial, r1, r2, [](double r) { return pi * r * std::exp(-k * r); });
    };

    double value = 0.0;
    if (d < R) {
        auto along = [&](double mu) { return chord(0.0, d * mu + std::sqrt(R * R - d * d * (1.0 - mu * mu))); };
        value = integrate(angular, -1.0, 0.0, along) + integrate(angular, 0.0, 1.0, along);
    } else {
        // mu = mu_t + (1 - mu_t) sigma^2 smooths the square root at the tangent cone.
        const double mu_t = std::sqrt(std::max(0.0, 1.0 - (R * R) / (d * d)));
        value = integrate(angular, 0.0, 1.0, [&](double sigma) {
            const double mu = mu_t + (1.0 - mu_t) * sigma * sigma;
            const double disc = std::sqrt(std::max(0.0, R * R - d * d * (1.0 - mu * mu)));
            return 2.0 * (1.0 - mu_t) * sigma * chord(d * mu - disc, d * mu + disc);
        });
    }
    return f.amplitude * (2.0 * pi * value);
}

SphereDensity zonal_harmonic(int degree, const Point3& axis) {
    if (degree < 0) throw DomainError("harmonic degree must be non-negative");
    const double len = norm3(axis);
    if (len == 0.0) throw DomainError("harmonic axis must be non-zero");
    const Point3 e{axis[0] / len, axis[1] / len, axis[2] / len};
    return [degree, e](const Point3& nu) {
        return Complex(boost::math::legendre_p(degree, nu[0] * e[0] + nu[1] * e[1] + nu[2] * e[2]), 0.0);
    };
}

PairingReport appendix_pairing(const SphereDensity& v, const BallSource& f, const QuadratureOrders& volume,
                               const SurfaceOrders& surface) {
    if (surface.azimuthal < 1) throw DomainError("azimuthal order must be positive");
    const Rule polar = gauss_legendre(surface.polar);
    const double R = f.radius;
    CompensatedSum<Complex> pairing, mass;
    const double dphi = 2.0 * pi / surface.azimuthal;
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
        const double ct = polar.nodes[i];
        const double st = std::sqrt(1.0 - ct * ct);
        for (int j = 0; j < surface.azimuthal; ++j) {
            const double phi = dphi * j;
            const Point3 nu{st * std::cos(phi), st * std::sin(phi), ct};
            const Point3 x{f.centre[0] + R * nu[0], f.centre[1] + R * nu[1], f.centre[2] + R * nu[2]};
            const double w = polar.weights[i] * dphi * R * R;
            const Complex vn = v(nu);
            pairing.add(w * vn * newton_potential(f, x, volume));
            mass.add(w * vn);
        }
    }
    PairingReport rep;
    rep.value = pairing.value();
    rep.oracle = f.amplitude * ball_potential(R, R) * mass.value();
    const double scale = std::abs(rep.oracle);
    rep.relative_deviation = std::abs(rep.value - rep.oracle) / (scale > 0.0 ? scale : 1.0);
    rep.volume_orders = volume;
    rep.surface_orders = surface;
    return rep;
}

double gaussian_potential(double r, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("Gaussian width must be positive");
    r = std::abs(r);
    const double s2 = std::sqrt(2.0) * sigma;
    const double ks2 = k * sigma * sigma;
    if (r < 1e-8 * sigma) {
        // Limit r -> 0 of the expression below.
        const double a = ks2 / s2;
        return pi * (2.0 / (std::sqrt(pi) * s2) * std::exp(-a * a) * std::exp(0.5 * k * k * sigma * sigma)
                     - k * std::erfc(a) * std::exp(0.5 * k * k * sigma * sigma));
    }
    // 4 pi^2 (G_k * g)(r), G_k = e^{-kr} / (4 pi r)
    const double lead = std::exp(0.5 * k * k * sigma * sigma) / (8.0 * pi * r);
    const double minus = std::exp(-k * r) * std::erfc((ks2 - r) / s2);
    const double tail = std::erfc((ks2 + r) / s2);
    const double plus = tail > 0.0 ? std::exp(k * r + std::log(tail)) : 0.0;
    return 4.0 * pi * pi * lead * (minus - plus);
}

SpectralCrossCheck spectral_cross_check(std::size_t points, double extent, double sigma) {
    const auto grid = spectral::GridSpec::cube(3, extent, points);
    const double norm = std::pow(2.0 * pi * sigma * sigma, -1.5);
    const auto g = spectral::SpectralField::sample(grid, [&](std::span<const double> x, int) {
        return Complex(norm * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * sigma * sigma)), 0.0);
    });
    const auto phi = spectral::bessel_potential(g, -2.0);
    const auto values = phi.values();

    SpectralCrossCheck rep;
    rep.grid_points = points;
    rep.extent = extent;
    rep.gaussian_width = sigma;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const auto x = phi.point(p);
        const double r = norm3(x);
        if (r < 0.5 || r > 1.5) continue;
        double exact = 0.0;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                for (int l = -1; l <= 1; ++l)
                    exact += gaussian_potential(norm3({x[0] - i * extent, x[1] - j * extent, x[2] - l * extent}),
                                                sigma);
        rep.max_relative_deviation = std::max(rep.max_relative_deviation, std::abs(values[p] - exact) / exact);
        ++rep.probe_points;
    }
    return rep;
}

}  // namespace sobolab::potentials
