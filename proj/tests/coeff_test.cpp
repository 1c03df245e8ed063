#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sobolab/coeff.hpp"

using namespace sobolab;
using namespace sobolab::coeff;

namespace {

constexpr double pi = std::numbers::pi;

HolderFunction on_interval(std::function<double(double)> f, double mu, double lo = -1.0, double hi = 1.0) {
    HolderFunction g;
    g.fn = [f = std::move(f)](std::span<const double> x) { return Complex(f(x[0]), 0.0); };
    g.exponent = mu;
    g.lower = {lo, 0.0, 0.0};
    g.upper = {hi, 0.0, 0.0};
    return g;
}

SpectralField gaussian(const GridSpec& grid) {
    return SpectralField::sample(grid, [](std::span<const double> x, int) { return Complex(std::exp(-pi * x[0] * x[0]), 0.0); });
}

}  // namespace

TEST(CoefficientClasses, RequiredExponentsByHand) {
    EXPECT_DOUBLE_EQ(required_exponent_b(0.0), 0.0);
    EXPECT_DOUBLE_EQ(required_exponent_c(2.0), 1.0);
    EXPECT_DOUBLE_EQ(required_exponent_a(-0.7), 0.7);
    EXPECT_DOUBLE_EQ(required_exponent_b(1.0), 0.0);
    EXPECT_DOUBLE_EQ(required_exponent_b(1.5), 0.5);
    EXPECT_DOUBLE_EQ(required_exponent_b(-0.5), 0.5);
    EXPECT_DOUBLE_EQ(required_exponent_c(0.5), 0.0);
    EXPECT_DOUBLE_EQ(required_exponent_c(-1.25), 0.25);
    // Piecewise-linear formulas on a grid of sigma.
    for (double s = -2.0; s <= 2.0; s += 0.125) {
        EXPECT_DOUBLE_EQ(required_exponent_a(s), std::abs(s));
        EXPECT_DOUBLE_EQ(required_exponent_b(s), std::max(0.0, std::abs(s - 0.5) - 0.5));
        EXPECT_DOUBLE_EQ(required_exponent_c(s), std::max(0.0, std::abs(s) - 1.0));
    }
}

TEST(CoefficientClasses, MeetsIsStrictExceptAtIntegers) {
    EXPECT_TRUE(exponent_meets(0.6, 0.5));
    EXPECT_FALSE(exponent_meets(0.5, 0.5));
    EXPECT_TRUE(exponent_meets(1.0, 1.0));
    EXPECT_TRUE(exponent_meets(0.995, 1.0));
    EXPECT_FALSE(exponent_meets(0.9, 1.0));
}

TEST(CoefficientClasses, SmoothLaplacianIsInEveryClass) {
    const auto report = coefficient_class_check(fem::CoefficientSet::laplacian(2), 0.9, {0.0, 0.0}, {1.0, 1.0});
    EXPECT_TRUE(report.pass);
    EXPECT_TRUE(std::isinf(report.measured[1]));
}

TEST(CoefficientClasses, RoughDiffusionFailsHighSigma) {
    const auto rough = fem::CoefficientSet::scalar_diffusion(
        1, [](const fem::Point& x) { return 1.0 + 0.5 * std::pow(std::abs(x[0] - 0.5), 0.4); });
    EXPECT_TRUE(coefficient_class_check(rough, 0.3, {0.0, 0.0}, {1.0, 0.0}).pass);
    EXPECT_FALSE(coefficient_class_check(rough, 0.6, {0.0, 0.0}, {1.0, 0.0}).pass);
}

TEST(Holder, SeminormOfPowerAtItsExponent) {
    // |x|^mu has [.]_mu = 1 on a symmetric interval (attained at x=0).
    const auto g = on_interval([](double x) { return std::pow(std::abs(x), 0.6); }, 0.6);
    EXPECT_NEAR(holder_seminorm(g, 0.6), 1.0, 1e-6);
    const auto lip = on_interval([](double x) { return std::abs(x); }, 1.0);
    EXPECT_NEAR(holder_seminorm(lip, 1.0), 1.0, 1e-6);
}

TEST(Holder, SeminormGrowsBeyondTheTrueExponent) {
    const auto g = on_interval([](double x) { return std::pow(std::abs(x), 0.6); }, 0.6);
    HolderSampling coarse, fine;
    coarse.levels = 10;
    fine.levels = 30;
    const double a = holder_seminorm(g, 0.7, coarse), b = holder_seminorm(g, 0.7, fine);
    // Dyadic offsets 2^-k reveal |h|^{-0.1} growth: 20 more levels give 2^{2}.
    EXPECT_NEAR(b / a, 4.0, 0.05);
}

TEST(Holder, OrderOneUsesGradientQuotient) {
    // x^2 on [0, 1]: gradient 2x has Lipschitz quotient 2; mu = 1.5 quotient sup is 2 * 1^{0.5}.
    const auto g = on_interval([](double x) { return x * x; }, 1.5, 0.0, 1.0);
    EXPECT_NEAR(holder_seminorm(g, 1.5), 2.0, 1e-4);
    EXPECT_THROW(holder_seminorm(g, 2.0), DomainError);
    EXPECT_THROW(holder_seminorm(g, -0.1), DomainError);
}

TEST(Holder, ExponentEstimates) {
    for (double mu : {0.3, 0.6, 0.9, 1.5}) {
        const auto g = on_interval([mu](double x) { return std::pow(std::abs(std::sin(pi * x)), mu); }, mu);
        const auto est = estimate_exponent(g);
        EXPECT_NEAR(est.exponent, mu, 0.02) << mu;
        EXPECT_FALSE(est.saturated);
        EXPECT_TRUE(declared_exponent_consistent(g));
    }
    const auto smooth = estimate_exponent(on_interval([](double x) { return std::cos(x); }, 1.0));
    EXPECT_TRUE(smooth.saturated);
    const auto affine = estimate_exponent(on_interval([](double x) { return 2.0 * x + 1.0; }, 1.0));
    EXPECT_TRUE(affine.negligible);
}

TEST(Commutator, VanishesAtZeroOrderAndForConstants) {
    const auto grid = GridSpec::cube(1, 8.0, 256);
    const auto w = gaussian(grid);
    const auto g = HolderFunction::on_grid(grid, 1.0, [](std::span<const double> x) { return Complex(std::cos(2 * pi * x[0]), 0.0); });
    const auto c = HolderFunction::on_grid(grid, 1.0, [](std::span<const double>) { return Complex(3.0, -1.0); });
    EXPECT_EQ(spectral::sup_norm(commutator(g, w, 0.0)), 0.0);
    EXPECT_LT(spectral::sup_norm(commutator(c, w, 1.0)), 1e-12);
    EXPECT_EQ(commutator_bound_check(g, w, 0.0, 0.5).ratio, 0.0);
}

TEST(Commutator, RatioIsRefinementStableAndLinearInT) {
    std::vector<double> ratios;
    for (std::size_t n : {128, 256, 512}) {
        const auto grid = GridSpec::cube(1, 8.0, n);
        const auto g = HolderFunction::on_grid(grid, 2.0, [](std::span<const double> x) { return Complex(std::cos(2 * pi * x[0]), 0.0); });
        ratios.push_back(commutator_bound_check(g, gaussian(grid), 1.0, 0.5).ratio);
    }
    EXPECT_LE(ratios.back(), 1.5 * ratios.front());
    const auto grid = GridSpec::cube(1, 8.0, 256);
    const auto g = HolderFunction::on_grid(grid, 2.0, [](std::span<const double> x) { return Complex(std::cos(2 * pi * x[0]), 0.0); });
    const auto w = gaussian(grid);
    for (double t : {0.25, 0.5}) {
        const double factor = commutator_bound_check(g, w, t, 0.5).commutator_norm /
                              commutator_bound_check(g, w, 0.5 * t, 0.5).commutator_norm;
        EXPECT_NEAR(factor, 2.0, 0.4);
    }
}

TEST(Product, HypothesisBoundaries) {
    EXPECT_TRUE(product_hypothesis_holds(1.0, 1.0));
    EXPECT_TRUE(product_hypothesis_holds(1.0, 0.9));
    EXPECT_FALSE(product_hypothesis_holds(0.5, 0.5));
    EXPECT_TRUE(product_hypothesis_holds(0.0, 0.0));
    EXPECT_FALSE(product_hypothesis_holds(0.3, -0.4));
}

TEST(Product, SeededRandomFieldsStayWithinSupBound) {
    // At s = 0 the product norm is bounded by sup|g| ||w|| <= holder_norm ||w||.
    std::mt19937_64 rng(21);
    const auto grid = GridSpec::cube(1, 8.0, 128);
    const auto g = HolderFunction::on_grid(grid, 0.5, [](std::span<const double> x) {
        return Complex(1.0 + std::sqrt(std::abs(std::sin(x[0]))), 0.0);
    });
    std::vector<SpectralField> fields;
    for (int k = 0; k < 10; ++k) fields.push_back(spectral::random_band_limited(grid, rng, 4.0));
    for (const auto& row : product_bound_check(g, fields, 0.0)) EXPECT_LE(row.ratio, 1.0);
}

TEST(Product, RatioIsRefinementStable) {
    std::vector<SpectralField> fields;
    for (std::size_t n : {128, 256, 512}) fields.push_back(gaussian(GridSpec::cube(1, 8.0, n)));
    const auto g = HolderFunction::on_grid(fields[0].grid(), 1.0, [](std::span<const double> x) { return Complex(std::cos(2 * pi * x[0]), 0.0); });
    const auto rows = product_bound_check(g, fields, 0.9);
    EXPECT_TRUE(rows.front().hypothesis_holds);
    EXPECT_LE(rows.back().ratio, 1.5 * rows.front().ratio);
}

TEST(Apriori, SlackIsNonnegativeOnRandomData) {
    const auto sys = ConstantSystem::laplacian(2);
    EXPECT_NEAR(ellipticity_margin(sys), 1.0, 1e-12);
    std::mt19937_64 rng(13);
    const auto grid = GridSpec::cube(2, 7.3, 32);
    for (double s : {-1.0, 0.0, 0.5})
        for (int k = 0; k < 10; ++k) EXPECT_TRUE(apriori_check(sys, spectral::random_band_limited(grid, rng, 3.0), s).holds);
}

TEST(Apriori, SolveInvertsTheSymbol) {
    // -Delta u = f with u = cos(2 pi x / L) sin(4 pi y / L): f = (2 pi)^2 ((1/L)^2 + (2/L)^2) u.
    const double L = 4.0;
    const auto grid = GridSpec::cube(2, L, 32);
    auto mode = [L](std::span<const double> x, int) {
        return Complex(std::cos(2 * pi * x[0] / L) * std::sin(4 * pi * x[1] / L), 0.0);
    };
    const auto u = SpectralField::sample(grid, mode);
    const auto f = spectral::scaled(u, 4 * pi * pi * 5.0 / (L * L));
    const auto back = solve_principal(ConstantSystem::laplacian(2), f);
    EXPECT_LT(spectral::sobolev_norm(spectral::axpy(-1.0, back, u), 0.0), 1e-12);
}

TEST(Apriori, NonEllipticSystemIsRejected) {
    auto sys = ConstantSystem::laplacian(1);
    sys.a[0] = -sys.a[0];
    const auto f = SpectralField::zeros(GridSpec::cube(1, 4.0, 16));
    EXPECT_THROW(apriori_check(sys, f, 0.0), DomainError);
}

TEST(Regularity, FitRecoversPowerLawShells) {
    std::vector<double> energies;
    for (int k = 0; k < 12; ++k) energies.push_back(std::pow(2.0, -2.0 * 1.75 * k));
    const auto fit = fit_decay(energies, 2, 11);
    EXPECT_NEAR(fit.index, 1.75, 1e-12);
    EXPECT_LT(fit.residual, 1e-12);
}

TEST(Regularity, IndexDropsWithCoefficientExponent) {
    auto probe = [](double mu) {
        RegularityProblem p;
        p.a = [mu](double x) { return 1.0 + 0.5 * std::pow(std::abs(std::sin(pi * x)), mu); };
        p.f = [](double x) { return std::exp(std::sin(pi * x)); };
        p.coefficient_exponent = mu;
        p.data_index = std::numeric_limits<double>::infinity();
        p.points = 4096;
        return regularity_probe(p);
    };
    const auto hi = probe(0.9), mid = probe(0.6), lo = probe(0.3);
    EXPECT_GE(hi.estimated_index, mid.estimated_index);
    EXPECT_GE(mid.estimated_index, lo.estimated_index);
    EXPECT_FALSE(lo.smooth);
    EXPECT_NEAR(hi.predicted_index, 1.9, 1e-12);
}

TEST(Regularity, SmoothCoefficientsAreFlagged) {
    RegularityProblem p;
    p.a = [](double x) { return 1.0 + 0.5 * std::sin(pi * x) * std::sin(pi * x); };
    p.f = [](double x) { return std::exp(std::sin(pi * x)); };
    p.coefficient_exponent = std::numeric_limits<double>::infinity();
    p.data_index = std::numeric_limits<double>::infinity();
    p.points = 4096;
    EXPECT_TRUE(regularity_probe(p).smooth);
}
