#include "sobolab/trace.hpp"

#include <algorithm>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

namespace sobolab::halfspace {


namespace {

int normal_axis(const GridSpec& g) { return g.dimension - 1; }

std::size_t normal_points(const GridSpec& g) { return g.points[normal_axis(g)]; }

double tangential_norm_squared(const GridSpec& bulk, std::size_t b) {
    if (bulk.dimension == 1) return 0.0;
    const auto bg = boundary_grid(bulk);
    const auto idx = bg.unflatten(b);
    double r2 = 0.0;
    for (int a = 0; a < bg.dimension; ++a) {
        const double xi = bg.frequency(a, idx[a]);
        r2 += xi * xi;
    }
    return r2;
}

void require_scalar_point(const GridSpec& bulk) {
    if (bulk.dimension == 1 && bulk.components != 1)
        throw DomainError("trace: one-dimensional traces are scalar");
}

void require_matching(const BoundaryField& v, const GridSpec& bulk) {
    if (v.bulk_dimension != bulk.dimension)
        throw GridMismatch("boundary field does not belong to this bulk grid");
    if (!v.is_point() && !(v.field.grid() == boundary_grid(bulk)))
        throw GridMismatch("boundary grid does not match the tangential bulk grid");
}

}  // namespace

BoundaryField BoundaryField::point(Complex value) {
    BoundaryField v;
    v.bulk_dimension = 1;
    v.point_value = value;
    return v;
}

BoundaryField BoundaryField::from_field(SpectralField field) {
    BoundaryField v;
    v.bulk_dimension = field.grid().dimension + 1;
    if (v.bulk_dimension > 3) throw DomainError("boundary field: at most two dimensions");
    v.field = std::move(field);
    return v;
}

GridSpec boundary_grid(const GridSpec& bulk) {
    if (bulk.dimension < 2) throw DomainError("boundary grid: the boundary of R^1 is a point");
    const auto d = static_cast<std::size_t>(bulk.dimension - 1);
    return GridSpec::make(std::span<const double>(bulk.extent.data(), d),
                          std::span<const std::size_t>(bulk.points.data(), d), bulk.components);
}

double boundary_norm(const BoundaryField& v, double s) {
    return v.is_point() ? std::abs(v.point_value) : spectral::sobolev_norm(v.field, s);
}

Complex boundary_dual(const BoundaryField& v, const BoundaryField& w) {
    if (v.bulk_dimension != w.bulk_dimension) throw GridMismatch("boundary fields differ in dimension");
    return v.is_point() ? v.point_value * w.point_value : spectral::dual_product(v.field, w.field);
}

double boundary_relative_error(const BoundaryField& v, const BoundaryField& w) {
    if (v.bulk_dimension != w.bulk_dimension) throw GridMismatch("boundary fields differ in dimension");
    if (v.is_point()) {
        const double d = std::abs(v.point_value - w.point_value);
        const double n = std::abs(w.point_value);
        return n > 0.0 ? d / n : d;
    }
    const double d = spectral::sample_l2_norm(spectral::axpy(-1.0, w.field, v.field));
    const double n = spectral::sample_l2_norm(w.field);
    return n > 0.0 ? d / n : d;
}

BoundaryField random_boundary_field(const GridSpec& bulk, std::mt19937_64& rng,
                                    double max_frequency) {
    if (bulk.dimension == 1) {
        std::normal_distribution<double> normal(0.0, 1.0);
        const double re = normal(rng);
        const double im = normal(rng);
        return BoundaryField::point(Complex(re, im));
    }
    return BoundaryField::from_field(
        spectral::random_band_limited(boundary_grid(bulk), rng, max_frequency));
}

double normal_profile_integral(double a, double e, double extent, std::size_t points) {
    if (e <= 0.5) return std::numeric_limits<double>::infinity();
    const long jmax = static_cast<long>(points) / 2 - 1;
    CompensatedSum<double> lattice;
    lattice.add(std::pow(a, -e));
    for (long j = 1; j <= jmax; ++j) {
        const double eta = static_cast<double>(j) / extent;
        lattice.add(2.0 * std::pow(a + eta * eta, -e));
    }
    // \int_X^inf (a + eta^2)^{-e} = a^{1/2-e} B(1/2, e-1/2) I_{1/(1+b^2)}(e-1/2, 1/2) / 2, b = X/sqrt(a)
    const double cut = (static_cast<double>(jmax) + 0.5) / extent;
    const double b2 = cut * cut / a;
    const double tail = 0.5 * std::pow(a, 0.5 - e) * boost::math::beta(0.5, e - 0.5) *
                        boost::math::ibeta(e - 0.5, 0.5, 1.0 / (1.0 + b2));
    return lattice.value() / extent + 2.0 * tail;
}

// ---------------------------------------------------------------------------

LayerField::LayerField(GridSpec bulk, BoundaryField density, double profile_exponent)
    : bulk_(bulk), density_(std::move(density)), q_(profile_exponent) {
    require_scalar_point(bulk_);
    require_matching(density_, bulk_);
    if (!std::isfinite(q_) || q_ < 0.0) throw DomainError("layer: profile exponent must be >= 0");
}

double LayerField::norm(double sigma) const {
    const double e = 2.0 * q_ - sigma;
    const double ln = bulk_.extent[normal_axis(bulk_)];
    const std::size_t nn = normal_points(bulk_);
    if (density_.is_point()) {
        if (density_.point_value == Complex{}) return 0.0;
        return std::abs(density_.point_value) * std::sqrt(normal_profile_integral(1.0, e, ln, nn));
    }
    const auto& g = density_.field.grid();
    const auto m = static_cast<std::size_t>(g.components);
    const auto vh = density_.field.fourier();
    CompensatedSum<double> acc;
    for (std::size_t b = 0; b < g.point_count(); ++b) {
        double energy = 0.0;
        for (std::size_t k = 0; k < m; ++k) energy += std::norm(vh[b * m + k]);
        if (energy == 0.0) continue;
        const double a = 1.0 + density_.field.frequency_norm_squared(b);
        // Compensated summation turns inf + inf into nan.
        if (e <= 0.5) return std::numeric_limits<double>::infinity();
        acc.add(energy * normal_profile_integral(a, e, ln, nn));
    }
    return std::sqrt(g.frequency_weight() * acc.value());
}

BoundaryField LayerField::trace() const {
    if (q_ <= 0.5) throw DomainError("layer: the trace of a layer with profile exponent <= 1/2 is undefined");
    const double ln = bulk_.extent[normal_axis(bulk_)];
    const std::size_t nn = normal_points(bulk_);
    if (density_.is_point())
        return BoundaryField::point(density_.point_value * normal_profile_integral(1.0, q_, ln, nn));
    const auto& g = density_.field.grid();
    const auto m = static_cast<std::size_t>(g.components);
    const auto vh = density_.field.fourier();
    std::vector<Complex> out(vh.size());
    for (std::size_t b = 0; b < g.point_count(); ++b) {
        const double w = normal_profile_integral(1.0 + density_.field.frequency_norm_squared(b), q_, ln, nn);
        for (std::size_t k = 0; k < m; ++k) out[b * m + k] = w * vh[b * m + k];
    }
    return BoundaryField::from_field(SpectralField::from_fourier(g, std::move(out)));
}

SpectralField LayerField::to_bulk() const {
    const std::size_t nn = normal_points(bulk_);
    const int ax = normal_axis(bulk_);
    const auto m = static_cast<std::size_t>(bulk_.components);
    std::vector<Complex> out(bulk_.value_count());
    const std::size_t nb = bulk_.point_count() / nn;
    std::span<const Complex> vh;
    if (!density_.is_point()) vh = density_.field.fourier();
    for (std::size_t b = 0; b < nb; ++b) {
        const double a = 1.0 + tangential_norm_squared(bulk_, b);
        for (std::size_t j = 0; j < nn; ++j) {
            const double xn = bulk_.frequency(ax, j);
            const double w = q_ == 0.0 ? 1.0 : std::pow(a + xn * xn, -q_);
            for (std::size_t k = 0; k < m; ++k) {
                const Complex v = density_.is_point() ? density_.point_value : vh[b * m + k];
                out[(b * nn + j) * m + k] = w * v;
            }
        }
    }
    return SpectralField::from_fourier(bulk_, std::move(out));
}

// ---------------------------------------------------------------------------

BoundaryField trace(const SpectralField& u) {
    const auto& bulk = u.grid();
    require_scalar_point(bulk);
    const std::size_t nn = normal_points(bulk);
    const auto vals = u.values();
    if (bulk.dimension == 1) return BoundaryField::point(vals[nn / 2]);
    const auto bg = boundary_grid(bulk);
    const auto m = static_cast<std::size_t>(bulk.components);
    std::vector<Complex> out(bg.value_count());
    for (std::size_t b = 0; b < bg.point_count(); ++b)
        for (std::size_t k = 0; k < m; ++k) out[b * m + k] = vals[(b * nn + nn / 2) * m + k];
    return BoundaryField::from_field(SpectralField::from_values(bg, std::move(out)));
}

LayerField trace_adjoint(const BoundaryField& v, const GridSpec& bulk) {
    return LayerField(bulk, v, 0.0);
}

SpectralField extension(const BoundaryField& v, const GridSpec& bulk, double s) {
    if (!(s >= 0.5 && s <= 1.5)) throw DomainError("extension: s must lie in [1/2, 3/2]");
    require_scalar_point(bulk);
    require_matching(v, bulk);
    const std::size_t nn = normal_points(bulk);
    const int ax = normal_axis(bulk);
    std::vector<Complex> out(bulk.value_count());
    if (v.is_point()) {
        for (std::size_t j = 0; j < nn; ++j)
            out[j] = v.point_value * std::exp(-std::abs(bulk.coordinate(ax, j)));
        return SpectralField::from_values(bulk, std::move(out));
    }
    const auto& bg = v.field.grid();
    const auto m = static_cast<std::size_t>(bg.components);
    const auto vh = v.field.fourier();
    std::vector<double> decay(bg.point_count());
    for (std::size_t b = 0; b < bg.point_count(); ++b)
        decay[b] = std::sqrt(1.0 + v.field.frequency_norm_squared(b));
    std::vector<Complex> row(vh.size());
    for (std::size_t j = 0; j < nn; ++j) {
        const double xn = std::abs(bulk.coordinate(ax, j));
        if (xn == 0.0) {
            const auto vals = v.field.values();
            for (std::size_t b = 0; b < bg.point_count(); ++b)
                for (std::size_t k = 0; k < m; ++k) out[(b * nn + j) * m + k] = vals[b * m + k];
            continue;
        }
        for (std::size_t b = 0; b < bg.point_count(); ++b)
            for (std::size_t k = 0; k < m; ++k) row[b * m + k] = vh[b * m + k] * std::exp(-decay[b] * xn);
        const auto layer = SpectralField::from_fourier(bg, row);
        const auto vals = layer.values();
        for (std::size_t b = 0; b < bg.point_count(); ++b)
            for (std::size_t k = 0; k < m; ++k) out[(b * nn + j) * m + k] = vals[b * m + k];
    }
    return SpectralField::from_values(bulk, std::move(out));
}

double damping_profile(DampingKernel kernel, double a, double xn) {
    switch (kernel) {
        case DampingKernel::exponential: return std::exp(-std::sqrt(a) * std::abs(xn));
        case DampingKernel::gaussian: return std::exp(-a * xn * xn);
    }
    return 0.0;
}

BoundaryField recover_density(const SpectralField& g, double t, DampingKernel kernel) {
    if (!std::isfinite(t) || t <= -1.5)
        throw DomainError("recover_density: t must exceed -3/2");
    const auto& bulk = g.grid();
    require_scalar_point(bulk);
    const std::size_t nn = normal_points(bulk);
    const int ax = normal_axis(bulk);
    const auto m = static_cast<std::size_t>(bulk.components);
    const std::size_t nb = bulk.point_count() / nn;

    const auto vals = g.values();
    CompensatedSum<double> on;
    CompensatedSum<double> off;
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t j = 0; j < nn; ++j)
            for (std::size_t k = 0; k < m; ++k)
                (j == nn / 2 ? on : off).add(std::norm(vals[(b * nn + j) * m + k]));
    const double total = on.value() + off.value();
    if (total > 0.0 && off.value() > 1e-16 * total)
        throw InconsistentData("recover_density: g does not vanish off the hyperplane",
                               std::sqrt(off.value() / total));
    if (t >= -0.5 && total > 0.0)
        throw InconsistentData("recover_density: only g = 0 is supported on the boundary for t >= -1/2",
                               std::sqrt(total * bulk.cell_volume()));

    // v^(xi') = (1/L_n) sum_{xi_n} g^(xi', xi_n) K^(-xi_n), with K the normal
    // transform of the lifting profile; sum K^ / L_n = k(0) = 1.
    const auto normal_grid = GridSpec::cube(1, bulk.extent[ax], nn);
    const auto gh = g.fourier();
    std::vector<Complex> out(nb * m);
    std::vector<Complex> profile(nn);
    for (std::size_t b = 0; b < nb; ++b) {
        const double a = 1.0 + tangential_norm_squared(bulk, b);
        for (std::size_t j = 0; j < nn; ++j)
            profile[j] = damping_profile(kernel, a, normal_grid.coordinate(0, j));
        const auto kfield = SpectralField::from_values(normal_grid, profile);
        const auto kh = kfield.fourier();
        for (std::size_t k = 0; k < m; ++k) {
            CompensatedSum<Complex> acc;
            for (std::size_t l = 0; l < nn; ++l)
                acc.add(gh[(b * nn + l) * m + k] * kh[normal_grid.negated_slot(0, l)]);
            out[b * m + k] = acc.value() / bulk.extent[ax];
        }
    }
    if (bulk.dimension == 1) return BoundaryField::point(out[0]);
    return BoundaryField::from_field(SpectralField::from_fourier(boundary_grid(bulk), std::move(out)));
}

// ---------------------------------------------------------------------------

std::vector<BlowupRow> blowup_probe(std::span<const double> s_list, const GridSpec& bulk,
                                    std::uint64_t seed, int probes) {
    require_scalar_point(bulk);
    const int ax = normal_axis(bulk);
    // Probe bandwidth: half the tangential Nyquist frequency.
    const double band = 0.25 * static_cast<double>(bulk.points[0]) / bulk.extent[0];
    const double bulk_band = 0.25 * static_cast<double>(bulk.points[ax]) / bulk.extent[ax];
    std::vector<BlowupRow> rows;
    for (double s : s_list) {
        const auto cs = trace_constant(s);
        std::mt19937_64 rng(seed);
        double best = 0.0;
        for (int i = 0; i < probes; ++i) {
            double ratio;
            if (i % 2 == 0) {
                const auto u = spectral::random_band_limited(bulk, rng, std::min(band, bulk_band));
                ratio = boundary_norm(trace(u), s - 0.5) / spectral::sobolev_norm(u, s);
            } else {
                const LayerField representer(bulk, random_boundary_field(bulk, rng, band), s);
                ratio = boundary_norm(representer.trace(), s - 0.5) / representer.norm(s);
            }
            best = std::max(best, ratio);
        }
        const double root = std::sqrt(cs.value);
        rows.push_back({s, best, root, best / root});
    }
    return rows;
}

}  // namespace sobolab::halfspace
