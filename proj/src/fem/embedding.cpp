#include "sobolab/fem.hpp"

#include <algorithm>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "quadrature.hpp"

namespace sobolab::fem {

namespace {

/// Uniform bucket grid over the mesh bounds for point location.
class CellLocator {
public:
    explicit CellLocator(const Mesh& mesh) : mesh_(mesh) {
        std::tie(lo_, hi_) = mesh.bounds();
        const int dim = mesh.dimension();
        const auto target = static_cast<double>(mesh.cell_count());
        buckets_[0] = std::max(1, static_cast<int>(dim == 1 ? target : std::sqrt(target)));
        buckets_[1] = dim == 1 ? 1 : buckets_[0];
        cells_.resize(static_cast<std::size_t>(buckets_[0] * buckets_[1]));
        for (std::size_t e = 0; e < mesh.cell_count(); ++e) {
            Point clo{1e300, 1e300};
            Point chi{-1e300, -1e300};
            for (int a = 0; a < mesh.nodes_per_cell(); ++a)
                for (int k = 0; k < 2; ++k) {
                    clo[k] = std::min(clo[k], mesh.vertices()[mesh.cells()[e][a]][k]);
                    chi[k] = std::max(chi[k], mesh.vertices()[mesh.cells()[e][a]][k]);
                }
            const auto [i0, j0] = bucket(clo);
            const auto [i1, j1] = bucket(chi);
            for (int i = i0; i <= i1; ++i)
                for (int j = j0; j <= j1; ++j) cells_[static_cast<std::size_t>(j * buckets_[0] + i)].push_back(e);
        }
    }

    /// Containing cell and barycentric coordinates, or cell = -1 outside.
    std::pair<long, std::array<double, 3>> locate(const Point& x) const {
        const double tol = 1e-12;
        for (int k = 0; k < mesh_.dimension(); ++k)
            if (x[k] < lo_[k] - tol || x[k] > hi_[k] + tol) return {-1, {}};
        const auto [i, j] = bucket(x);
        for (std::size_t e : cells_[static_cast<std::size_t>(j * buckets_[0] + i)]) {
            const auto bary = barycentric(e, x);
            if (std::min({bary[0], bary[1], mesh_.dimension() == 1 ? 0.0 : bary[2]}) >= -tol)
                return {static_cast<long>(e), bary};
        }
        return {-1, {}};
    }

private:
    std::pair<int, int> bucket(const Point& x) const {
        std::array<int, 2> idx{};
        for (int k = 0; k < 2; ++k) {
            const double w = hi_[k] - lo_[k];
            const double t = w > 0.0 ? (x[k] - lo_[k]) / w : 0.0;
            idx[k] = std::clamp(static_cast<int>(t * buckets_[k]), 0, buckets_[k] - 1);
        }
        return {idx[0], idx[1]};
    }

    std::array<double, 3> barycentric(std::size_t e, const Point& x) const {
        const auto& c = mesh_.cells()[e];
        const Point& p = mesh_.vertices()[c[0]];
        const Point& q = mesh_.vertices()[c[1]];
        if (mesh_.dimension() == 1) {
            const double t = (x[0] - p[0]) / (q[0] - p[0]);
            return {1.0 - t, t, 0.0};
        }
        const Point& r = mesh_.vertices()[c[2]];
        const double det = (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]);
        const double l1 = ((x[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (x[1] - p[1])) / det;
        const double l2 = ((q[0] - p[0]) * (x[1] - p[1]) - (x[0] - p[0]) * (q[1] - p[1])) / det;
        return {1.0 - l1 - l2, l1, l2};
    }

    const Mesh& mesh_;
    Point lo_{};
    Point hi_{};
    std::array<int, 2> buckets_{1, 1};
    std::vector<std::vector<std::size_t>> cells_;
};

std::size_t next_power_of_two(double x) {
    std::size_t n = 4;
    while (static_cast<double>(n) < x) n *= 2;
    return n;
}

void require_scalar_field(const Mesh& mesh, const Vector& u) {
    if (u.size() != static_cast<Eigen::Index>(mesh.node_count()))
        throw GridMismatch("expected a scalar field on the mesh");
}

/// Signed distances to the four sides of the bounding rectangle as affine
/// functions of (xi, eta) on the triangle P0 + xi (P1 - P0) + eta (P2 - P0);
/// coefficients are formed from exact coordinate differences so that the
/// distance keeps full relative precision next to the boundary.
struct AffineDistance {
    std::array<std::array<double, 3>, 4> coef{};

    AffineDistance(const Point& p0, const Point& p1, const Point& p2, const Point& lo, const Point& hi) {
        const std::array<std::pair<int, double>, 4> sides{{{0, lo[0]}, {0, hi[0]}, {1, lo[1]}, {1, hi[1]}}};
        for (int s = 0; s < 4; ++s) {
            const auto [axis, value] = sides[s];
            const double sign = (s % 2 == 0) ? 1.0 : -1.0;
            coef[s] = {sign * (p0[axis] - value), sign * (p1[axis] - p0[axis]), sign * (p2[axis] - p0[axis])};
        }
    }

    double operator()(double xi, double eta) const {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& c : coef) d = std::min(d, c[0] + xi * c[1] + eta * c[2]);
        return std::max(d, 0.0);
    }
};

double weighted_l2_1d(const Mesh& mesh, const Vector& u, double s) {
    const auto [lo, hi] = mesh.bounds();
    boost::math::quadrature::tanh_sinh<double> integrator;
    CompensatedSum<double> acc;
    for (std::size_t e = 0; e < mesh.cell_count(); ++e) {
        const auto& c = mesh.cells()[e];
        const double x0 = mesh.vertices()[c[0]][0];
        const double x1 = mesh.vertices()[c[1]][0];
        if (u[c[0]] == Complex{} && u[c[1]] == Complex{}) continue;
        const double h = x1 - x0;
        // Local coordinate t in [0, 1]; for t >= 1/2 the complement tc = 1 - t
        // is exact, so distances to the cell ends keep full relative precision.
        auto integrand = [&](double t, double tc) {
            const double right = t < 0.5 ? 1.0 - t : tc;
            const double dl = x0 == lo[0] ? t * h : (x0 + t * h) - lo[0];
            const double dr = x1 == hi[0] ? right * h : hi[0] - (x0 + t * h);
            const Complex val = right * u[c[0]] + t * u[c[1]];
            return std::pow(std::min(dl, dr), -2.0 * s) * std::norm(val) * h;
        };
        acc.add(integrator.integrate(integrand, 0.0, 1.0, 1e-12));
    }
    return acc.value();
}

double weighted_l2_2d(const Mesh& mesh, const Vector& u, double s) {
    const auto [lo, hi] = mesh.bounds();
    const auto& rule = detail::error_rule(2);
    const auto on_boundary = mesh.boundary_mask();
    boost::math::quadrature::tanh_sinh<double> inner(8);
    boost::math::quadrature::tanh_sinh<double> outer(8);
    CompensatedSum<double> acc;
    for (std::size_t e = 0; e < mesh.cell_count(); ++e) {
        auto c = mesh.cells()[e];
        int touching = 0;
        for (int a = 0; a < 3; ++a) touching += on_boundary[c[a]];
        const double area = mesh.cell_measure(e);
        if (touching == 0) {
            for (std::size_t q = 0; q < rule.weights.size(); ++q) {
                Point x{};
                Complex val{};
                for (int a = 0; a < 3; ++a) {
                    x[0] += rule.points[q][a] * mesh.vertices()[c[a]][0];
                    x[1] += rule.points[q][a] * mesh.vertices()[c[a]][1];
                    val += rule.points[q][a] * u[c[a]];
                }
                const double d = std::min({x[0] - lo[0], hi[0] - x[0], x[1] - lo[1], hi[1] - x[1]});
                acc.add(rule.weights[q] * area * std::pow(d, -2.0 * s) * std::norm(val));
            }
            continue;
        }
        // Order the vertices so the singular set sits at eta = 0 (a boundary
        // edge P0P1) or at the corner xi = eta = 0 (a single boundary vertex P0).
        if (touching >= 2) {
            while (!(on_boundary[c[0]] && on_boundary[c[1]])) std::rotate(c.begin(), c.begin() + 1, c.end());
        } else {
            while (!on_boundary[c[0]]) std::rotate(c.begin(), c.begin() + 1, c.end());
        }
        const Point& p0 = mesh.vertices()[c[0]];
        const Point& p1 = mesh.vertices()[c[1]];
        const Point& p2 = mesh.vertices()[c[2]];
        const AffineDistance dist(p0, p1, p2, lo, hi);
        const Complex u0 = u[c[0]];
        const Complex u1 = u[c[1]];
        const Complex u2 = u[c[2]];
        auto integrand_xi = [&](double xi) {
            if (xi >= 1.0) return 0.0;
            auto f = [&](double eta) {
                const double d = dist(xi, eta);
                if (d <= 0.0) return 0.0;
                const Complex val = (1.0 - xi - eta) * u0 + xi * u1 + eta * u2;
                return std::pow(d, -2.0 * s) * std::norm(val);
            };
            return inner.integrate(f, 0.0, 1.0 - xi, 1e-10);
        };
        acc.add(2.0 * area * outer.integrate(integrand_xi, 0.0, 1.0, 1e-9));
    }
    return acc.value();
}

}  // namespace

spectral::GridSpec ambient_grid(const Mesh& mesh, int refine) {
    if (refine < 1) throw DomainError("ambient grid: refinement factor must be positive");
    const auto [lo, hi] = mesh.bounds();
    double r = 0.0;
    for (int k = 0; k < mesh.dimension(); ++k) r = std::max({r, std::abs(lo[k]), std::abs(hi[k])});
    const double spacing = mesh.mesh_size() / refine;
    const std::size_t n = next_power_of_two(4.0 * r / spacing);
    return spectral::GridSpec::cube(mesh.dimension(), static_cast<double>(n) * spacing, n);
}

spectral::SpectralField embed(const Mesh& mesh, int components, const Vector& u, int component,
                              const spectral::GridSpec& grid) {
    if (grid.dimension != mesh.dimension()) throw GridMismatch("embedding grid dimension differs from the mesh");
    if (u.size() != static_cast<Eigen::Index>(mesh.node_count()) * components)
        throw GridMismatch("field does not match the mesh");
    const CellLocator locator(mesh);
    const auto& cells = mesh.cells();
    return spectral::SpectralField::sample(grid, [&](std::span<const double> x, int) {
        const Point p{x[0], mesh.dimension() == 2 ? x[1] : 0.0};
        const auto [e, bary] = locator.locate(p);
        if (e < 0) return Complex{};
        Complex v{};
        for (int a = 0; a < mesh.nodes_per_cell(); ++a)
            v += bary[a] * u[static_cast<Eigen::Index>(cells[e][a]) * components + component];
        return v;
    });
}

DistanceWeightReport distance_weight_check(const Mesh& mesh, const Vector& u, double s, int refine) {
    if (!(s > 0.0 && s < 0.5)) throw DomainError("distance weight check: s must lie in (0, 1/2)");
    require_scalar_field(mesh, u);
    DistanceWeightReport r;
    r.lhs = mesh.dimension() == 1 ? weighted_l2_1d(mesh, u, s) : weighted_l2_2d(mesh, u, s);
    const double norm = spectral::sobolev_norm(embed(mesh, 1, u, 0, ambient_grid(mesh, refine)), s);
    r.rhs = norm * norm;
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
    return r;
}

std::vector<ZeroExtensionRow> zero_extension_probe(const Mesh& mesh, const Vector& u,
                                                   std::span<const double> s_list, int refine) {
    require_scalar_field(mesh, u);
    const double scale = u.cwiseAbs().maxCoeff();
    for (int node : mesh.boundary_nodes())
        if (std::abs(u[node]) > 1e-14 * std::max(scale, 1.0))
            throw DomainError("zero extension probe: the field has a nonzero boundary trace");
    const auto field = embed(mesh, 1, u, 0, ambient_grid(mesh, refine));
    std::vector<ZeroExtensionRow> rows;
    for (double s : s_list) rows.push_back({s, spectral::sobolev_norm(field, s)});
    return rows;
}

}  // namespace sobolab::fem
