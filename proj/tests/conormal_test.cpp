#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sobolab/conormal.hpp"

using namespace sobolab;
using namespace sobolab::fem;
using namespace sobolab::conormal;

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

std::vector<FemSystem> systems() {
    const Complex i(0.0, 1.0);
    CoefficientSet s;
    s.dimension = 2;
    s.components = 2;
    DenseMatrix a(2, 2), b(2, 2), c(2, 2);
    a << 2.0, 0.3 + 0.1 * i, -0.2 + 0.1 * i, 1.5;
    b << 0.5, 0.2 * i, 0.1, -0.3;
    c << 1.0, 0.2, -0.1 * i, 1.2;
    s.a[0][0] = [a](const Point&) { return a; };
    s.a[1][1] = [a](const Point& x) { return DenseMatrix((1.0 + x[1]) * a); };
    s.b = {[b](const Point&) { return b; }, {}};
    s.d[1] = [b](const Point&) { return DenseMatrix(b.adjoint()); };
    s.c = [c](const Point&) { return c; };
    return {assemble(CoefficientSet::laplacian(1, 1, 1.0), Mesh::interval(0.0, 1.0, 12)),
            assemble(CoefficientSet::scalar_diffusion(2, [](const Point& x) { return 1.0 + x[0]; }), Mesh::unit_square(6)),
            assemble(s, Mesh::unit_square(5))};
}

}  // namespace

TEST(Conormal, AggregateExtensionHasZeroConormal) {
    std::mt19937_64 rng(1);
    for (const auto& sys : systems()) {
        const BoundarySpace space(sys.mesh, sys.components());
        for (int k = 0; k < 10; ++k) {
            const Vector u = random_vector(sys.dofs(), rng);
            EXPECT_LE(space.norm(generalized_conormal(sys, u, aggregate_extension(sys, u)).coefficients), 1e-10);
        }
    }
}

TEST(Conormal, NominationRoundTrip) {
    std::mt19937_64 rng(2);
    for (const auto& sys : systems()) {
        const BoundarySpace space(sys.mesh, sys.components());
        for (int k = 0; k < 10; ++k) {
            const Vector u = random_vector(sys.dofs(), rng);
            ConormalTrace t{random_vector(space.size(), rng)};
            const auto back = generalized_conormal(sys, u, nominate_conormal(sys, u, t));
            EXPECT_LT((back.coefficients - t.coefficients).norm(), 1e-10 * t.coefficients.norm());
        }
    }
}

TEST(Conormal, FirstGreenIdentityForEveryChoice) {
    std::mt19937_64 rng(3);
    for (const auto& sys : systems()) {
        const BoundarySpace space(sys.mesh, sys.components());
        const Vector u = random_vector(sys.dofs(), rng);
        ConormalTrace t{random_vector(space.size(), rng)};
        for (const auto& choice : {aggregate_extension(sys, u), classical_extension(sys, u), nominate_conormal(sys, u, t)}) {
            const auto trace = generalized_conormal(sys, u, choice);
            EXPECT_LE(first_green_residual(sys, u, choice, trace), 1e-10) << to_string(choice.kind);
        }
    }
}

TEST(Conormal, ClassicalExtensionRecoversClassicalTrace) {
    std::mt19937_64 rng(4);
    for (const auto& sys : systems()) {
        const Vector u = random_vector(sys.dofs(), rng);
        const auto direct = classical_conormal(sys, u);
        const auto recovered = generalized_conormal(sys, u, classical_extension(sys, u));
        EXPECT_LT((direct.coefficients - recovered.coefficients).norm(), 1e-10 * direct.coefficients.norm());
    }
}

TEST(Conormal, DifferenceOfExtensionsIsALayer) {
    std::mt19937_64 rng(5);
    for (const auto& sys : systems()) {
        const BoundarySpace space(sys.mesh, sys.components());
        const Vector u = random_vector(sys.dofs(), rng);
        ConormalTrace t{random_vector(space.size(), rng)};
        const auto diff = conormal_difference(sys, u, classical_extension(sys, u), nominate_conormal(sys, u, t));
        EXPECT_LE(diff.mismatch, 1e-10);
    }
}

TEST(Conormal, InconsistentExtensionIsRejected) {
    const auto sys = systems()[1];
    std::mt19937_64 rng(6);
    const Vector u = random_vector(sys.dofs(), rng);
    auto choice = aggregate_extension(sys, u);
    // Perturb the functional on an interior node.
    const auto mask = sys.mesh.boundary_mask();
    const auto it = std::find(mask.begin(), mask.end(), false);
    choice.functional[it - mask.begin()] += 1.0;
    EXPECT_THROW(generalized_conormal(sys, u, choice), InconsistentData);
}

TEST(Conormal, LiftingIndependenceForDiscreteSolutions) {
    for (int n : {6, 12}) {
        const auto mesh = Mesh::unit_square(n);
        const auto sys = assemble(CoefficientSet::scalar_diffusion(2, [](const Point& x) { return 1.0 + x[0] * x[1]; }), mesh);
        VectorFunction f = [](const Point& x) { return scalar(std::exp(x[0]) - x[1]); };
        const auto u = solve_dirichlet(sys, load_vector(mesh, 1, f), [](const Point& x) { return scalar(x[0] * x[1]); });
        const auto choice = canonical_extension(sys, f);
        const auto a = generalized_conormal(sys, u, choice, Lifting::zero_interior);
        const auto b = generalized_conormal(sys, u, choice, Lifting::discrete_harmonic);
        EXPECT_LT((a.coefficients - b.coefficients).norm(), 1e-10 * a.coefficients.norm());
    }
}

TEST(Conormal, CanonicalConvergesToExactFlux) {
    std::vector<double> errors;
    for (int n : {8, 16, 32, 64}) {
        const auto mesh = Mesh::unit_square(n);
        const auto sys = assemble(CoefficientSet::laplacian(2), mesh);
        VectorFunction f = [](const Point& x) { return scalar(2 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1])); };
        const auto u = solve_dirichlet(sys, load_vector(mesh, 1, f), [](const Point&) { return scalar(0.0); });
        errors.push_back(boundary_l2_error(mesh, 1, canonical_conormal(sys, u, f), [](const Point& x, const Point& nu) {
            return scalar(pi * (nu[0] * std::cos(pi * x[0]) * std::sin(pi * x[1]) +
                                nu[1] * std::sin(pi * x[0]) * std::cos(pi * x[1])));
        }));
    }
    for (double r : observed_rates(errors)) EXPECT_GE(r, 1.0);
}

TEST(Conormal, SecondGreenIdentityWithRecoveredTraces) {
    std::mt19937_64 rng(7);
    for (const auto& sys : systems()) {
        const auto adj = assemble_adjoint(sys.coefficients, sys.mesh);
        const BoundarySpace space(sys.mesh, sys.components());
        const Vector u = random_vector(sys.dofs(), rng);
        const Vector v = random_vector(sys.dofs(), rng);
        ConormalTrace t{random_vector(space.size(), rng)};
        EXPECT_LE(second_green_residual(sys, adj, {u, nominate_conormal(sys, u, t), v, classical_extension(adj, v)}), 1e-10);
    }
}

TEST(Conormal, CanonicalExtensionRangeIsEnforced) {
    const auto sys = systems()[0];
    EXPECT_THROW(canonical_extension(sys, [](const Point&) { return scalar(1.0); }, 0.5), DomainError);
}

TEST(Conormal, TraceCsvHasOneRowPerBoundaryDof) {
    const auto sys = systems()[2];
    std::mt19937_64 rng(8);
    const Vector u = random_vector(sys.dofs(), rng);
    std::stringstream out;
    write_trace_csv(out, sys.mesh, 2, classical_conormal(sys, u));
    std::string line;
    int rows = -1;
    while (std::getline(out, line)) ++rows;
    EXPECT_EQ(rows, static_cast<int>(2 * sys.mesh.boundary_nodes().size()));
}
