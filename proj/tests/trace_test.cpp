#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sobolab/trace.hpp"

using namespace sobolab;
using namespace sobolab::halfspace;

namespace {

// Independent oracle: sqrt(pi) Gamma(s - 1/2) / Gamma(s).
double gamma_ratio(double s) { return std::sqrt(std::numbers::pi) * std::tgamma(s - 0.5) / std::tgamma(s); }

}  // namespace

TEST(TraceConstant, ClosedFormValues) {
    EXPECT_NEAR(trace_constant(1.0).value, std::numbers::pi, 1e-12);
    EXPECT_NEAR(trace_constant(1.5).value, 2.0, 1e-12);
    for (double s : {0.55, 0.6, 0.75, 1.0, 1.25, 2.0, 3.7})
        EXPECT_NEAR(trace_constant(s).value / gamma_ratio(s), 1.0, 1e-13) << s;
}

TEST(TraceConstant, QuadratureAgrees) {
    for (double s : {0.6, 0.75, 1.0, 1.25})
        EXPECT_LT(std::abs(trace_constant_quadrature(s) / trace_constant(s).value - 1.0), 1e-10) << s;
}

TEST(TraceConstant, DecreasingAndDivergent) {
    double previous = std::numeric_limits<double>::infinity();
    for (double s = 0.501; s < 4.0; s += 0.05) {
        const double c = trace_constant(s).value;
        EXPECT_LT(c, previous);
        previous = c;
    }
    EXPECT_GT(trace_constant(0.5 + 1e-6).value, 1e6);
    EXPECT_THROW(trace_constant(0.5), DomainError);
    EXPECT_THROW(trace_constant(0.2), DomainError);
}

TEST(AdjointTrace, NormIdentityOnRandomDensities) {
    const auto bulk = GridSpec::cube(2, 16.0, 256);
    std::mt19937_64 rng(42);
    for (int k = 0; k < 25; ++k) {
        const auto v = random_boundary_field(bulk, rng, 4.0);
        const auto layer = trace_adjoint(v, bulk);
        for (double s : {0.55, 0.75, 1.0, 1.4}) {
            const double ratio = layer.norm(-s) / (std::sqrt(trace_constant(s).value) * boundary_norm(v, 0.5 - s));
            EXPECT_GE(ratio, 0.99);
            EXPECT_LE(ratio, 1.01);
        }
    }
}

TEST(AdjointTrace, NormIsInfiniteAtOrBelowHalf) {
    const auto bulk = GridSpec::cube(2, 8.0, 64);
    std::mt19937_64 rng(1);
    const auto layer = trace_adjoint(random_boundary_field(bulk, rng, 2.0), bulk);
    EXPECT_TRUE(std::isinf(layer.norm(-0.5)));
    EXPECT_TRUE(std::isinf(layer.norm(0.0)));
}

TEST(AdjointTrace, DivergenceWitnessFollowsTraceConstant) {
    const auto bulk = GridSpec::cube(2, 16.0, 256);
    std::mt19937_64 rng(11);
    const auto layer = trace_adjoint(random_boundary_field(bulk, rng, 4.0), bulk);
    const auto v = layer.density();
    const double measured = (layer.norm(-0.51) / boundary_norm(v, -0.01)) / (layer.norm(-0.75) / boundary_norm(v, -0.25));
    const double predicted = std::sqrt(gamma_ratio(0.51) / gamma_ratio(0.75));
    EXPECT_NEAR(measured / predicted, 1.0, 0.05);
}

TEST(AdjointTrace, DualPairingMatchesBoundaryPairing) {
    const auto bulk = GridSpec::cube(2, 16.0, 128);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 5; ++k) {
        const auto v = random_boundary_field(bulk, rng, 2.0);
        const auto w = spectral::random_band_limited(bulk, rng, 2.0);
        const Complex lhs = spectral::dual_product(trace_adjoint(v, bulk).to_bulk(), w);
        const Complex rhs = boundary_dual(v, trace(w));
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::abs(rhs));
    }
}

TEST(Extension, IsARightInverseOfTrace) {
    std::mt19937_64 rng(5);
    for (int dim : {1, 2, 3}) {
        const auto bulk = GridSpec::cube(dim, 16.0, dim == 3 ? 32 : 128);
        for (double s : {0.5, 0.6, 1.0, 1.4, 1.5}) {
            const auto v = random_boundary_field(bulk, rng, 0.8);
            EXPECT_LT(boundary_relative_error(trace(extension(v, bulk, s)), v), 1e-10) << dim << " " << s;
        }
    }
}

TEST(Extension, RejectsIndicesOutsideRange) {
    const auto bulk = GridSpec::cube(2, 8.0, 32);
    std::mt19937_64 rng(1);
    const auto v = random_boundary_field(bulk, rng, 1.0);
    EXPECT_THROW(extension(v, bulk, 0.4), DomainError);
    EXPECT_THROW(extension(v, bulk, 1.6), DomainError);
}

TEST(RecoverDensity, InvertsTheAdjointTrace) {
    const auto bulk = GridSpec::cube(2, 16.0, 128);
    std::mt19937_64 rng(9);
    for (auto kernel : {DampingKernel::exponential, DampingKernel::gaussian}) {
        for (double t : {-1.4, -1.0, -0.6}) {
            const auto v = random_boundary_field(bulk, rng, 3.0);
            const auto g = trace_adjoint(v, bulk).to_bulk();
            EXPECT_LT(boundary_relative_error(recover_density(g, t, kernel), v), 1e-8);
        }
    }
}

TEST(RecoverDensity, RejectsNonzeroLayersAboveMinusHalf) {
    const auto bulk = GridSpec::cube(2, 16.0, 64);
    std::mt19937_64 rng(2);
    const auto g = trace_adjoint(random_boundary_field(bulk, rng, 1.0), bulk).to_bulk();
    EXPECT_THROW(recover_density(g, -0.25), InconsistentData);
    EXPECT_NO_THROW(recover_density(spectral::SpectralField::zeros(bulk), -0.25));
    EXPECT_THROW(recover_density(g, -1.5), DomainError);
}

TEST(RecoverDensity, RejectsFieldsOffTheHyperplane) {
    const auto bulk = GridSpec::cube(2, 16.0, 64);
    std::mt19937_64 rng(4);
    const auto bulk_field = spectral::random_band_limited(bulk, rng, 1.0);
    EXPECT_THROW(recover_density(bulk_field, -1.0), InconsistentData);
}

TEST(BlowupProbe, NormsDecreaseAndMatchRootConstant) {
    const double s_list[] = {0.51, 0.55, 0.6, 0.75, 1.0};
    const auto rows = blowup_probe(s_list, GridSpec::cube(2, 16.0, 128), 20240601, 40);
    ASSERT_EQ(rows.size(), 5u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i].sqrt_trace_constant, std::sqrt(gamma_ratio(rows[i].s)), 1e-10);
        EXPECT_NEAR(rows[i].ratio, 1.0, 0.05);
        if (i > 0) EXPECT_LT(rows[i].empirical_norm, rows[i - 1].empirical_norm);
    }
}
