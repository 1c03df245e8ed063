#pragma once

// Trace, trace adjoint and extension on the half-space {x_n > 0} of a
// periodic box. The boundary hyperplane is x_n = 0, which is the sample
// N_n / 2 of the last axis; for n = 1 the boundary is the point x = 0.

#include <cstdint>
#include <vector>

#include "sobolab/spectral.hpp"

namespace sobolab::halfspace {

using spectral::GridSpec;
using spectral::SpectralField;

struct TraceConstant {
    double s = 1.0;
    double value = 0.0;
};

/// C_s = \int (1 + eta^2)^{-s} d eta = sqrt(pi) Gamma(s - 1/2) / Gamma(s); DomainError for s <= 1/2.
TraceConstant trace_constant(double s);
/// The same integral by tanh-sinh quadrature, for cross-checking.
double trace_constant_quadrature(double s);

/// Field on the boundary hyperplane: an (n-1)-dimensional SpectralField, or a
/// single complex value when the bulk dimension is 1.
struct BoundaryField {
    int bulk_dimension = 1;
    Complex point_value{};
    SpectralField field;

    static BoundaryField point(Complex value);
    static BoundaryField from_field(SpectralField field);

    bool is_point() const { return bulk_dimension == 1; }
};

/// Grid of the hyperplane x_n = 0 for a bulk grid of dimension >= 2.
GridSpec boundary_grid(const GridSpec& bulk);

double boundary_norm(const BoundaryField& v, double s);
/// <v, w> on the hyperplane (bilinear).
Complex boundary_dual(const BoundaryField& v, const BoundaryField& w);
/// Relative L2 distance ||v - w|| / ||w|| (absolute when w = 0).
double boundary_relative_error(const BoundaryField& v, const BoundaryField& w);
BoundaryField random_boundary_field(const GridSpec& bulk, std::mt19937_64& rng,
                                    double max_frequency);

/// \int_R (a + eta^2)^{-e} d eta as a lattice sum over the resolved normal
/// frequencies |j| <= N/2 - 1 of spacing 1/L plus the exact tails beyond
/// (N/2 - 1/2)/L. Infinite for e <= 1/2.
double normal_profile_integral(double a, double e, double extent, std::size_t points);

/// Distribution with Fourier coefficients v^(xi') (1 + |xi'|^2 + xi_n^2)^{-q}.
/// q = 0 is the layer gamma* v; q = s gives the Riesz representer J^{-2s} gamma* v.
/// Normal frequencies beyond the grid are accounted for analytically, so
/// norms are those of the distribution on R^n, not of its truncation.
class LayerField {
public:
    LayerField(GridSpec bulk, BoundaryField density, double profile_exponent = 0.0);

    const GridSpec& bulk_grid() const { return bulk_; }
    const BoundaryField& density() const { return density_; }
    double profile_exponent() const { return q_; }

    /// H^sigma norm; +infinity when 2q - sigma <= 1/2.
    double norm(double sigma) const;
    /// Trace on x_n = 0; requires q > 1/2.
    BoundaryField trace() const;
    /// Truncation to the bulk grid (coefficients on the resolved frequencies).
    SpectralField to_bulk() const;

private:
    GridSpec bulk_;
    BoundaryField density_;
    double q_;
};

/// Restriction of bulk samples to the hyperplane x_n = 0.
BoundaryField trace(const SpectralField& u);

/// gamma* v, the layer on x_n = 0 with density v.
LayerField trace_adjoint(const BoundaryField& v, const GridSpec& bulk);

/// E(xi', x_n) = v^(xi') exp(-(1 + |xi'|^2)^{1/2} |x_n|) sampled on the bulk
/// grid; a right inverse of trace for 1/2 <= s <= 3/2.
SpectralField extension(const BoundaryField& v, const GridSpec& bulk, double s);

enum class DampingKernel { exponential, gaussian };

/// Normal profile k(x_n) with k(0) = 1 used to lift boundary test functions.
double damping_profile(DampingKernel kernel, double a, double xn);

/// Recovers v with gamma* v = g from <v, w> = <g, gamma_{-1} w>, for g stored
/// on the bulk grid. Requires -3/2 < t < -1/2; for t >= -1/2 only g = 0 is
/// admissible (InconsistentData otherwise). g must vanish off the hyperplane.
BoundaryField recover_density(const SpectralField& g, double t,
                              DampingKernel kernel = DampingKernel::exponential);

struct BlowupRow {
    double s = 0.0;
    double empirical_norm = 0.0;
    double sqrt_trace_constant = 0.0;
    /// empirical_norm / sqrt_trace_constant
    double ratio = 0.0;
};

/// Empirical norm of gamma: H^s -> H^{s-1/2} as a maximum of
/// ||gamma u|| / ||u|| over seeded probes: half are random band-limited bulk
/// fields, half are representers J^{-2s} gamma* v of random densities v.
std::vector<BlowupRow> blowup_probe(std::span<const double> s_list, const GridSpec& bulk,
                                    std::uint64_t seed = 20240601, int probes = 200);

}  // namespace sobolab::halfspace
