#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sobolab/fem.hpp"

using namespace sobolab;
using namespace sobolab::fem;

namespace {

constexpr double pi = std::numbers::pi;

Vector scalar(Complex z) {
    Vector v(1);
    v[0] = z;
    return v;
}

Vector random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(n);
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return v;
}

double min_rate(const std::vector<double>& errors) {
    const auto r = observed_rates(errors);
    return *std::min_element(r.begin(), r.end());
}

CoefficientSet nonsymmetric_system() {
    const Complex i(0.0, 1.0);
    CoefficientSet s;
    s.dimension = 2;
    s.components = 2;
    auto constant = [](DenseMatrix m) { return [m](const Point&) { return m; }; };
    DenseMatrix a(2, 2), b(2, 2), d(2, 2), c(2, 2);
    a << 2.0, 0.3 + 0.1 * i, -0.2, 1.5;
    b << 0.5, 0.2 * i, 0.0, -0.3;
    d << 0.1 * i, 0.0, 0.2, 0.0;
    c << 1.0, 0.2 + 0.1 * i, -0.1, 1.2;
    s.a[0][0] = constant(a);
    s.a[1][1] = [a](const Point& x) { return DenseMatrix((1.0 + 0.5 * x[0]) * a); };
    s.b = {constant(b), constant(b.transpose())};
    s.d = {constant(d), {}};
    s.c = constant(c);
    return s;
}

}  // namespace

TEST(Mesh, IntervalAndSquareTopology) {
    const auto line = Mesh::interval(0.0, 1.0, 10);
    EXPECT_EQ(line.node_count(), 11u);
    EXPECT_EQ(line.boundary_nodes(), (std::vector<int>{0, 10}));
    EXPECT_EQ(line.tags(), (std::set<int>{1, 2}));
    const auto sq = Mesh::unit_square(4);
    EXPECT_EQ(sq.node_count(), 25u);
    EXPECT_EQ(sq.cell_count(), 32u);
    EXPECT_EQ(sq.boundary_nodes().size(), 16u);
    EXPECT_EQ(sq.tags(), (std::set<int>{1, 2, 3, 4}));
    EXPECT_NEAR(sq.mesh_size(), std::sqrt(2.0) / 4.0, 1e-15);
    double area = 0.0;
    for (std::size_t c = 0; c < sq.cell_count(); ++c) area += sq.cell_measure(c);
    EXPECT_NEAR(area, 1.0, 1e-14);
}

TEST(Mesh, TextRoundTrip) {
    const auto sq = Mesh::rectangle(0.0, 2.0, -1.0, 1.0, 3, 2);
    std::stringstream buf;
    sq.write(buf);
    const auto back = Mesh::read(buf);
    EXPECT_EQ(back.vertices(), sq.vertices());
    EXPECT_EQ(back.cells(), sq.cells());
    EXPECT_EQ(back.facets().size(), sq.facets().size());
}

TEST(Mesh, RejectsDegenerateCells) {
    std::vector<Point> v{{0, 0}, {1, 0}, {2, 0}};
    EXPECT_THROW(Mesh::from_parts(2, v, {{0, 1, 2}}, {}), DomainError);
}

TEST(Assembly, AdjointMatrixIsConjugateTranspose) {
    const auto coeffs = nonsymmetric_system();
    const auto mesh = Mesh::unit_square(5);
    const auto a = assemble(coeffs, mesh);
    const auto b = assemble_adjoint(coeffs, mesh);
    const SparseMatrix diff = SparseMatrix(a.matrix.adjoint()) - b.matrix;
    EXPECT_LT(diff.norm(), 1e-13 * a.matrix.norm());
}

TEST(Assembly, AggregateSecondGreenIdentityIsExact) {
    const auto coeffs = nonsymmetric_system();
    const auto mesh = Mesh::unit_square(6);
    const auto a = assemble(coeffs, mesh);
    const auto b = assemble_adjoint(coeffs, mesh);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k)
        EXPECT_LE(aggregate_second_green_residual(a, b, random_vector(a.dofs(), rng), random_vector(a.dofs(), rng)),
                  1e-12);
}

TEST(Ellipticity, DetectsPositiveAndNegativeMargins) {
    const auto mesh = Mesh::unit_square(2);
    EXPECT_TRUE(check_strong_ellipticity(CoefficientSet::laplacian(2), sample_points(mesh)).elliptic);
    auto bad = CoefficientSet::laplacian(2);
    bad.a[1][1] = [](const Point&) { return DenseMatrix::Constant(1, 1, -1.0); };
    EXPECT_FALSE(check_strong_ellipticity(bad, sample_points(mesh)).elliptic);
}

// Affine functions lie in the P1 space, so every problem type must reproduce them.
TEST(PatchTest, AffineSolutionsAreReproduced) {
    auto affine = [](const Point& x) { return scalar(0.3 + 1.7 * x[0] - 0.4 * x[1]); };
    for (int dim : {1, 2}) {
        const auto mesh = dim == 1 ? Mesh::interval(0.0, 1.0, 7) : Mesh::unit_square(5);
        const auto sys = assemble(CoefficientSet::laplacian(dim), mesh);
        const Vector zero = Vector::Zero(sys.dofs());
        const Vector exact = interpolate(mesh, 1, affine);
        EXPECT_LT((solve_dirichlet(sys, zero, affine) - exact).norm(), 1e-10);

        // Flux of the affine field through each tagged side.
        const std::map<int, Point> normals =
            dim == 1 ? std::map<int, Point>{{1, {-1, 0}}, {2, {1, 0}}}
                     : std::map<int, Point>{{1, {0, -1}}, {2, {1, 0}}, {3, {0, 1}}, {4, {-1, 0}}};
        Vector g = Vector::Zero(sys.dofs());
        for (const auto& [tag, nu] : normals) {
            const double flux = 1.7 * nu[0] - (dim == 2 ? 0.4 * nu[1] : 0.0);
            g += boundary_load(mesh, 1, [flux](const Point&) { return scalar(flux); }, {tag});
        }
        const auto tags = dim == 1 ? std::set<int>{1} : std::set<int>{4, 1};
        EXPECT_LT((solve_mixed(sys, g, tags, affine) - exact).norm(), 1e-10);

        // Pure Neumann fixes the mean, so compare up to a constant.
        Vector u = solve_neumann(sys, g);
        const Vector d = u - exact;
        EXPECT_LT((d.array() - d.mean()).matrix().norm(), 1e-10);
    }
}

TEST(Convergence, DirichletRatesOnTheSquare) {
    std::vector<double> l2, h1;
    for (int n : {8, 16, 32, 64}) {
        const auto mesh = Mesh::unit_square(n);
        const auto sys = assemble(CoefficientSet::laplacian(2), mesh);
        const auto u = solve_dirichlet(
            sys, load_vector(mesh, 1, [](const Point& x) { return scalar(2 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1])); }),
            [](const Point&) { return scalar(0.0); });
        l2.push_back(l2_error(mesh, 1, u, [](const Point& x) { return scalar(std::sin(pi * x[0]) * std::sin(pi * x[1])); }));
        h1.push_back(h1_seminorm_error(mesh, 1, u, [](const Point& x) {
            DenseMatrix g(1, 2);
            g << pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
            return g;
        }));
    }
    EXPECT_GE(min_rate(l2), 1.9);
    EXPECT_GE(min_rate(h1), 0.9);
}

TEST(Solvers, GalerkinOrthogonality) {
    const auto coeffs = nonsymmetric_system();
    const auto mesh = Mesh::unit_square(8);
    const auto sys = assemble(coeffs, mesh);
    std::mt19937_64 rng(5);
    const Vector load = random_vector(sys.dofs(), rng);
    const auto u = solve_dirichlet(sys, load, [](const Point& x) {
        Vector g(2);
        g << Complex(x[0], 0.0), Complex(0.0, x[1]);
        return g;
    });
    std::vector<int> interior;
    const auto mask = mesh.boundary_mask();
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (!mask[i]) interior.push_back(static_cast<int>(i));
    EXPECT_LT(galerkin_residual(sys, u, load, interior), 1e-10);
}

TEST(Solvers, DecoupledSystemMatchesScalarSolves) {
    const auto mesh = Mesh::unit_square(10);
    auto alpha0 = [](const Point& x) { return 1.0 + x[0] * x[1]; };
    auto alpha1 = [](const Point& x) { return 2.0 + std::sin(x[0]); };
    CoefficientSet sys2;
    sys2.dimension = 2;
    sys2.components = 2;
    for (int i = 0; i < 2; ++i)
        sys2.a[i][i] = [=](const Point& x) {
            DenseMatrix m = DenseMatrix::Zero(2, 2);
            m(0, 0) = alpha0(x);
            m(1, 1) = alpha1(x);
            return m;
        };
    auto f = [](const Point& x) {
        Vector v(2);
        v << Complex(1.0 + x[0], 0.0), Complex(0.0, x[1]);
        return v;
    };
    auto g = [](const Point& x) {
        Vector v(2);
        v << Complex(x[1], 0.0), Complex(x[0] * x[0], 1.0);
        return v;
    };
    const auto coupled = solve_dirichlet(assemble(sys2, mesh), load_vector(mesh, 2, f), g);
    for (int k = 0; k < 2; ++k) {
        const auto s = assemble(CoefficientSet::scalar_diffusion(2, k == 0 ? std::function<double(const Point&)>(alpha0)
                                                                           : std::function<double(const Point&)>(alpha1)),
                                mesh);
        const auto u = solve_dirichlet(s, load_vector(mesh, 1, [&](const Point& x) { return scalar(f(x)[k]); }),
                                       [&](const Point& x) { return scalar(g(x)[k]); });
        double worst = 0.0;
        for (Eigen::Index p = 0; p < u.size(); ++p) worst = std::max(worst, std::abs(u[p] - coupled[2 * p + k]));
        EXPECT_LT(worst, 1e-12 * u.cwiseAbs().maxCoeff());
    }
}

TEST(Solvers, IncompatibleNeumannDataIsRejected) {
    const auto mesh = Mesh::interval(0.0, 1.0, 32);
    const auto sys = assemble(CoefficientSet::laplacian(1), mesh);
    EXPECT_THROW(solve_neumann(sys, load_vector(mesh, 1, [](const Point&) { return scalar(1.0); })), InconsistentData);
    // Compatible data: mean-zero volume load.
    EXPECT_NO_THROW(solve_neumann(sys, load_vector(mesh, 1, [](const Point& x) { return scalar(std::cos(pi * x[0])); })));
}

TEST(Embedding, DistanceWeightOfConstantOnInterval) {
    // \int_0^1 min(x, 1 - x)^{-1/2} dx = 2 sqrt(2).
    const auto mesh = Mesh::interval(0.0, 1.0, 64);
    const Vector one = Vector::Ones(static_cast<Eigen::Index>(mesh.node_count()));
    EXPECT_NEAR(distance_weight_check(mesh, one, 0.25).lhs, 2.0 * std::sqrt(2.0), 1e-8);
}

TEST(Embedding, ZeroExtensionNormsIncreaseWithIndex) {
    const auto mesh = Mesh::interval(0.0, 1.0, 32);
    const Vector u = interpolate(mesh, 1, [](const Point& x) { return scalar(std::sin(pi * x[0])); });
    const double s_list[] = {0.0, 0.25, 0.45};
    const auto rows = zero_extension_probe(mesh, u, s_list);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].norm, l2_norm(mesh, 1, u), 2e-2 * rows[0].norm);
    EXPECT_LT(rows[0].norm, rows[1].norm);
    EXPECT_LT(rows[1].norm, rows[2].norm);
}
