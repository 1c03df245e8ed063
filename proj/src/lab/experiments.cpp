#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sobolab/coeff.hpp"
#include "sobolab/potentials.hpp"
#include "sobolab/trace.hpp"

namespace sobolab::lab {

namespace detail {

namespace {

using spectral::GridSpec;
using spectral::SpectralField;

constexpr double pi = std::numbers::pi;

std::vector<double> doubles(const Json& v) { return v.get<std::vector<double>>(); }

GridSpec bulk_grid(const Json& c) {
    return GridSpec::cube(c["n"].get<int>(), c["L"].get<double>(), c["N"].get<std::size_t>());
}

Outcome trace_constants(const Json& c) {
    Outcome out;
    const double closed_tol = c["closed_form_tolerance"].get<double>();
    const double quad_tol = c["quadrature_tolerance"].get<double>();
    const double c1 = halfspace::trace_constant(1.0).value;
    const double c32 = halfspace::trace_constant(1.5).value;
    out.expect(std::abs(c1 - pi) <= closed_tol, "C_1 differs from pi");
    out.expect(std::abs(c32 - 2.0) <= closed_tol, "C_3/2 differs from 2");

    Table table{"trace_constants", {"s", "closed_form", "quadrature", "relative_difference"}, {}};
    double worst = 0.0;
    for (double s : doubles(c["s"])) {
        const double closed = halfspace::trace_constant(s).value;
        const double quad = halfspace::trace_constant_quadrature(s);
        const double rel = std::abs(closed - quad) / closed;
        worst = std::max(worst, rel);
        table.rows.push_back({s, closed, quad, rel});
    }
    out.expect(worst <= quad_tol, "closed form and quadrature disagree beyond " + num(quad_tol));
    out.tables.push_back(std::move(table));
    out.summary = {{"C_1_error", std::abs(c1 - pi)}, {"C_3/2_error", std::abs(c32 - 2.0)}, {"max_quadrature_difference", worst}};
    out.summary["headline"] = "|C_1-pi|=" + num(std::abs(c1 - pi)) + " |C_3/2-2|=" + num(std::abs(c32 - 2.0)) +
                              " max quadrature diff=" + num(worst);
    return out;
}

Outcome trace_adjoint_identity(const Json& c) {
    Outcome out;
    const auto bulk = bulk_grid(c);
    const double band = c["identity_band"].get<double>();
    const double maxfreq = c["max_frequency"].get<double>();
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    Table table{"adjoint_identity", {"s", "min_ratio", "max_ratio", "samples"}, {}};
    double lo = 1e300, hi = 0.0;
    for (double s : doubles(c["s"])) {
        const double root = std::sqrt(halfspace::trace_constant(s).value);
        double smin = 1e300, smax = 0.0;
        for (int k = 0; k < c["samples"].get<int>(); ++k) {
            const auto v = halfspace::random_boundary_field(bulk, rng, maxfreq);
            const auto layer = halfspace::trace_adjoint(v, bulk);
            const double ratio = layer.norm(-s) / (root * halfspace::boundary_norm(v, 0.5 - s));
            smin = std::min(smin, ratio);
            smax = std::max(smax, ratio);
        }
        table.rows.push_back({s, smin, smax, c["samples"].get<int>()});
        lo = std::min(lo, smin);
        hi = std::max(hi, smax);
    }
    out.expect(lo >= 1.0 - band && hi <= 1.0 + band, "adjoint trace ratio outside [1-band, 1+band]");
    out.tables.push_back(std::move(table));
    out.summary = {{"min_ratio", lo}, {"max_ratio", hi}};
    out.summary["headline"] = "ratio range [" + num(lo) + ", " + num(hi) + "]";
    return out;
}

Outcome trace_blowup(const Json& c) {
    Outcome out;
    const auto bulk = bulk_grid(c);
    const auto s_list = doubles(c["s"]);
    const auto rows = halfspace::blowup_probe(s_list, bulk, c["seed"].get<std::uint64_t>(), c["probes"].get<int>());
    const double tol = c["rate_tolerance"].get<double>();
    Table table{"blowup", {"s", "C_s", "empirical_norm", "sqrt_C_s", "ratio"}, {}};
    double worst = 0.0;
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        table.rows.push_back({r.s, r.sqrt_trace_constant * r.sqrt_trace_constant, r.empirical_norm,
                              r.sqrt_trace_constant, r.ratio});
        worst = std::max(worst, std::abs(r.ratio - 1.0));
        if (i > 0 && rows[i].s > rows[i - 1].s && !(rows[i].empirical_norm < rows[i - 1].empirical_norm))
            decreasing = false;
    }
    out.expect(decreasing, "empirical norms are not strictly decreasing in s");
    out.expect(worst <= tol, "empirical norm departs from sqrt(C_s) by more than " + num(tol));
    out.tables.push_back(std::move(table));
    out.summary = {{"max_relative_departure", worst}, {"strictly_decreasing", decreasing}};
    out.summary["headline"] = "max |ratio-1|=" + num(worst) + (decreasing ? ", strictly decreasing" : ", NOT decreasing");
    return out;
}

}  // namespace

Outcome run_trace_norm(const Json& c) {
    const auto check = c["check"].get<std::string>();
    if (check == "constant") return trace_constants(c);
    if (check == "adjoint-identity") return trace_adjoint_identity(c);
    if (check == "blowup") return trace_blowup(c);
    throw UsageError("trace-norm: check must be constant, adjoint-identity or blowup");
}

Outcome run_extension(const Json& c) {
    Outcome out;
    const auto bulk = bulk_grid(c);
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    const double tol = c["tolerance"].get<double>();
    Table table{"extension", {"s", "max_relative_error", "samples"}, {}};
    double worst = 0.0;
    for (double s : doubles(c["s"])) {
        double smax = 0.0;
        for (int k = 0; k < c["samples"].get<int>(); ++k) {
            const auto v = halfspace::random_boundary_field(bulk, rng, c["max_frequency"].get<double>());
            const auto e = halfspace::extension(v, bulk, s);
            smax = std::max(smax, halfspace::boundary_relative_error(halfspace::trace(e), v));
        }
        table.rows.push_back({s, smax, c["samples"].get<int>()});
        worst = std::max(worst, smax);
    }
    out.expect(worst <= tol, "trace of the extension departs from the data beyond " + num(tol));
    out.tables.push_back(std::move(table));
    out.summary = {{"max_relative_error", worst}};
    out.summary["headline"] = "max ||trace(ext v) - v|| / ||v|| = " + num(worst);
    return out;
}

Outcome run_recover_density(const Json& c) {
    Outcome out;
    const auto bulk = bulk_grid(c);
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    const double tol = c["tolerance"].get<double>();
    Table table{"recover_density", {"t", "kernel", "max_relative_error", "samples"}, {}};
    double worst = 0.0;
    for (const auto& kname : c["kernels"].get<std::vector<std::string>>()) {
        halfspace::DampingKernel kernel;
        if (kname == "exponential")
            kernel = halfspace::DampingKernel::exponential;
        else if (kname == "gaussian")
            kernel = halfspace::DampingKernel::gaussian;
        else
            throw UsageError("recover-density: kernel must be exponential or gaussian");
        for (double t : doubles(c["t"])) {
            double smax = 0.0;
            for (int k = 0; k < c["samples"].get<int>(); ++k) {
                const auto v = halfspace::random_boundary_field(bulk, rng, c["max_frequency"].get<double>());
                const auto g = halfspace::trace_adjoint(v, bulk).to_bulk();
                smax = std::max(smax, halfspace::boundary_relative_error(halfspace::recover_density(g, t, kernel), v));
            }
            table.rows.push_back({t, kname, smax, c["samples"].get<int>()});
            worst = std::max(worst, smax);
        }
    }
    out.expect(worst <= tol, "recovered density departs from the layer density beyond " + num(tol));
    bool rejected = true;
    if (c["check_rejection"].get<bool>()) {
        // Above -1/2 no nonzero distribution on the hyperplane is admissible.
        const auto v = halfspace::random_boundary_field(bulk, rng, c["max_frequency"].get<double>());
        const auto g = halfspace::trace_adjoint(v, bulk).to_bulk();
        try {
            halfspace::recover_density(g, -0.25);
            rejected = false;
        } catch (const InconsistentData&) {
        }
        out.expect(rejected, "a layer was accepted as an element of H^{-1/4}");
    }
    out.tables.push_back(std::move(table));
    out.summary = {{"max_relative_error", worst}, {"rejects_t_above_minus_half", rejected}};
    out.summary["headline"] = "max density error " + num(worst);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

coeff::HolderFunction cosine_on(const GridSpec& grid, double exponent) {
    return coeff::HolderFunction::on_grid(grid, exponent, [](std::span<const double> x) {
        return Complex(std::cos(2.0 * pi * x[0]), 0.0);
    });
}

SpectralField gaussian_on(const GridSpec& grid) {
    return SpectralField::sample(grid, [](std::span<const double> x, int) {
        return Complex(std::exp(-pi * x[0] * x[0]), 0.0);
    });
}

}  // namespace

Outcome run_commutator(const Json& c) {
    Outcome out;
    const double L = c["L"].get<double>();
    const double t = c["t"].get<double>();
    const double s = c["s"].get<double>();
    const double zero_tol = c["zero_tolerance"].get<double>();
    const auto sizes = c["N"].get<std::vector<std::size_t>>();
    if (sizes.empty()) throw UsageError("commutator: N must list at least one size");

    Table table{"commutator", {"N", "t", "s", "family", "commutator_norm", "field_norm", "ratio"}, {}};
    std::vector<double> ratios;
    double zero_t = 0.0, zero_const = 0.0;
    for (std::size_t n : sizes) {
        const auto grid = GridSpec::cube(1, L, n);
        const auto w = gaussian_on(grid);
        const auto g = cosine_on(grid, 2.0);
        const auto row = coeff::commutator_bound_check(g, w, t, s);
        table.rows.push_back({n, t, s, "smooth", row.commutator_norm, row.field_norm, row.ratio});
        ratios.push_back(row.ratio);

        zero_t = std::max(zero_t, spectral::sup_norm(coeff::commutator(g, w, 0.0)));
        const auto constant = coeff::HolderFunction::on_grid(grid, 1.0, [](std::span<const double>) {
            return Complex(2.5, 0.0);
        });
        zero_const = std::max(zero_const, spectral::sup_norm(coeff::commutator(constant, w, t)));

        // Rough input: band-limited noise; the commutator still gains one order.
        std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
        const auto noise = spectral::random_band_limited(grid, rng, 0.25 * static_cast<double>(n) / L);
        const auto rough = coeff::commutator_bound_check(g, noise, t, s);
        table.rows.push_back({n, t, s, "noise", rough.commutator_norm, rough.field_norm, rough.ratio});
    }
    out.expect(zero_t <= zero_tol, "commutator at t = 0 is not zero");
    out.expect(zero_const <= zero_tol, "commutator with a constant is not zero");
    const double growth = ratios.back() / ratios.front();
    out.expect(growth <= c["refinement_factor"].get<double>(), "ratio is not refinement-stable");

    // Linear scaling in t, each order measured in its own H^{s-t+1} norm.
    const auto grid = GridSpec::cube(1, L, sizes.back());
    const auto w = gaussian_on(grid);
    const auto g = cosine_on(grid, 2.0);
    const double band = c["scaling_band"].get<double>();
    Table scaling{"commutator_scaling", {"t", "norm_t", "norm_half_t", "factor"}, {}};
    double worst = 0.0;
    for (double tt : doubles(c["scaling_t"])) {
        const double full = coeff::commutator_bound_check(g, w, tt, s).commutator_norm;
        const double half = coeff::commutator_bound_check(g, w, 0.5 * tt, s).commutator_norm;
        const double factor = full / half;
        scaling.rows.push_back({tt, full, half, factor});
        worst = std::max(worst, std::abs(factor / 2.0 - 1.0));
    }
    out.expect(worst <= band, "commutator norm is not linear in t within the band");
    out.tables.push_back(std::move(table));
    out.tables.push_back(std::move(scaling));
    out.summary = {{"zero_at_t0", zero_t},
                   {"zero_for_constant", zero_const},
                   {"ratio_first", ratios.front()},
                   {"ratio_last", ratios.back()},
                   {"refinement_growth", growth},
                   {"max_scaling_departure", worst}};
    out.summary["headline"] = "zero(t=0)=" + num(zero_t) + " zero(const)=" + num(zero_const) +
                              " ratio growth=" + num(growth) + " scaling departure=" + num(worst);
    return out;
}

Outcome run_product_bound(const Json& c) {
    Outcome out;
    const double L = c["L"].get<double>();
    const double s = c["s"].get<double>();
    const double mu = c["mu"].get<double>();
    const auto sizes = c["N"].get<std::vector<std::size_t>>();
    if (sizes.empty()) throw UsageError("product-bound: N must list at least one size");

    std::vector<SpectralField> fields;
    for (std::size_t n : sizes) fields.push_back(gaussian_on(GridSpec::cube(1, L, n)));
    const auto g1 = cosine_on(fields.front().grid(), mu);
    const auto rows = coeff::product_bound_check(g1, fields, s);
    Table table{"product_bound", {"N", "s", "product_norm", "holder_norm", "field_norm", "ratio", "hypothesis_holds"}, {}};
    double first = 0.0, last = 0.0;
    for (const auto& r : rows) {
        table.rows.push_back({r.points, r.s, r.product_norm, r.holder_norm, r.field_norm, r.ratio, r.hypothesis_holds});
        if (&r == &rows.front()) first = r.ratio;
        last = r.ratio;
    }
    const bool hypothesis = coeff::product_hypothesis_holds(mu, s);
    if (hypothesis) out.expect(last <= c["refinement_factor"].get<double>() * first, "product ratio grows under refinement");

    // L2 bound by the sup norm and multiplication by a constant.
    const auto zero_rows = coeff::product_bound_check(g1, fields, 0.0);
    double l2_ratio = 0.0;
    for (const auto& r : zero_rows) l2_ratio = std::max(l2_ratio, r.ratio);
    out.expect(l2_ratio <= 1.0, "L2 product ratio exceeds 1");
    const auto constant = coeff::HolderFunction::on_grid(fields.front().grid(), mu, [](std::span<const double>) {
        return Complex(-1.75, 0.0);
    });
    double const_dev = 0.0;
    for (const auto& r : coeff::product_bound_check(constant, fields, s)) const_dev = std::max(const_dev, std::abs(r.ratio - 1.0));
    out.expect(const_dev <= 1e-12, "constant multiplier ratio differs from 1");

    out.tables.push_back(std::move(table));
    out.summary = {{"hypothesis_holds", hypothesis}, {"ratio_first", first}, {"ratio_last", last},
                   {"l2_ratio", l2_ratio}, {"constant_deviation", const_dev}};
    if (!hypothesis) out.summary["warning"] = "mu - |s| outside R_+(s); ratios shown without a bound";
    out.summary["headline"] = "ratio " + num(first) + " -> " + num(last) + ", L2 ratio " + num(l2_ratio);
    return out;
}

namespace {

coeff::ConstantSystem preset_system(const std::string& name, int dimension) {
    if (name == "scalar") return coeff::ConstantSystem::laplacian(dimension, 1);
    if (name != "system") throw UsageError("apriori: systems must be scalar or system");
    using M = Eigen::MatrixXcd;
    coeff::ConstantSystem sys;
    sys.dimension = dimension;
    sys.components = 2;
    const Complex i(0.0, 1.0);
    for (int r = 0; r < dimension; ++r) {
        for (int q = 0; q < dimension; ++q) {
            M b(2, 2);
            if (r == q && r == 0)
                b << 2.0, 0.4 + 0.2 * i, -0.4 + 0.2 * i, 1.5;
            else if (r == q)
                b << 1.5, 0.0, 0.0, 2.0;
            else
                b << 0.3, 0.0, 0.0, 0.2;
            sys.a.push_back(b);
        }
    }
    sys.theta = M(2, 2);
    sys.theta << 1.0, 0.1, 0.1, 1.0;
    return sys;
}

}  // namespace

Outcome run_apriori(const Json& c) {
    Outcome out;
    const int n = c["n"].get<int>();
    const auto grid_base = GridSpec::cube(n, c["L"].get<double>(), c["N"].get<std::size_t>());
    Table table{"apriori", {"system", "s", "c0", "c1", "min_slack", "min_relative_slack", "samples"}, {}};
    double worst_rel = 1e300;
    int violations = 0;
    for (const auto& name : c["systems"].get<std::vector<std::string>>()) {
        const auto sys = preset_system(name, n);
        auto grid = grid_base;
        grid.components = sys.components;
        for (double s : doubles(c["s"])) {
            std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
            double min_slack = 1e300, min_rel = 1e300;
            coeff::AprioriReport rep;
            for (int k = 0; k < c["samples"].get<int>(); ++k) {
                const auto f = spectral::random_band_limited(grid, rng, c["max_frequency"].get<double>());
                rep = coeff::apriori_check(sys, f, s);
                if (!rep.holds) ++violations;
                min_slack = std::min(min_slack, rep.slack);
                min_rel = std::min(min_rel, rep.slack / rep.rhs);
            }
            table.rows.push_back({name, s, rep.c0, rep.c1, min_slack, min_rel, c["samples"].get<int>()});
            worst_rel = std::min(worst_rel, min_rel);
        }
    }
    out.expect(violations == 0, num(violations) + " samples with negative slack");
    out.tables.push_back(std::move(table));
    out.summary = {{"violations", violations}, {"min_relative_slack", worst_rel}};
    out.summary["headline"] = "violations " + std::to_string(violations) + ", min relative slack " + num(worst_rel);
    return out;
}

Outcome run_regularity(const Json& c) {
    Outcome out;
    const auto points = c["points"].get<std::size_t>();
    const double extent = c["extent"].get<double>();
    const auto data = [](double x) { return std::exp(std::sin(pi * x)); };
    auto rough = [](double mu) {
        return [mu](double x) { return 1.0 + 0.5 * std::pow(std::abs(std::sin(pi * x)), mu); };
    };

    Table table{"regularity", {"case", "mu", "measured_exponent", "estimated_index", "predicted_index",
                               "fit_residual", "smooth", "inconclusive", "iterations"}, {}};
    auto add_row = [&](const std::string& name, double mu, double measured, const coeff::RegularityReport& r) {
        table.rows.push_back({name, jnum(mu), jnum(measured), r.estimated_index, jnum(r.predicted_index),
                              r.fit_residual, r.smooth, r.inconclusive, r.solver_iterations});
    };

    auto mus = doubles(c["mu"]);
    std::sort(mus.begin(), mus.end(), std::greater<>());
    std::vector<double> indices;
    bool inconclusive = false;
    for (double mu : mus) {
        coeff::RegularityProblem p;
        p.a = rough(mu);
        p.f = data;
        p.coefficient_exponent = mu;
        p.data_index = std::numeric_limits<double>::infinity();
        p.extent = extent;
        p.points = points;
        const auto r = coeff::regularity_probe(p);
        coeff::HolderFunction a;
        a.lower = {-0.5 * extent, 0.0, 0.0};
        a.upper = {0.5 * extent, 0.0, 0.0};
        a.fn = [f = p.a](std::span<const double> x) { return Complex(f(x[0]), 0.0); };
        add_row("rough", mu, coeff::estimate_exponent(a).exponent, r);
        indices.push_back(r.estimated_index);
        inconclusive = inconclusive || r.inconclusive;
    }
    bool monotone = true;
    for (std::size_t i = 1; i < indices.size(); ++i) monotone = monotone && indices[i] <= indices[i - 1];
    out.expect(monotone, "estimated index increases as the coefficient exponent decreases");
    out.expect(!inconclusive, "a decay fit was inconclusive");

    coeff::RegularityProblem smooth;
    smooth.a = [](double x) { return 1.0 + 0.5 * std::sin(pi * x) * std::sin(pi * x); };
    smooth.f = data;
    smooth.coefficient_exponent = std::numeric_limits<double>::infinity();
    smooth.data_index = std::numeric_limits<double>::infinity();
    smooth.extent = extent;
    smooth.points = points;
    const auto base = coeff::regularity_probe(smooth);
    add_row("smooth", std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), base);
    out.expect(base.smooth, "smooth baseline not flagged smooth");

    const double sf = c["lacunary_index"].get<double>();
    double lacunary_error = 0.0;
    if (sf > 0.0) {
        coeff::RegularityProblem lac = smooth;
        lac.data_index = sf;
        // Lacunary cosines up to a quarter of the resolved band.
        const int top = static_cast<int>(std::log2(static_cast<double>(points))) - 1;
        lac.f = [sf, top](double x) {
            double sum = 0.0;
            for (int k = 1; k < top; ++k) sum += std::pow(2.0, -k * sf) * std::cos(pi * std::ldexp(1.0, k) * x);
            return sum;
        };
        const auto r = coeff::regularity_probe(lac);
        add_row("lacunary", std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), r);
        lacunary_error = std::abs(r.estimated_index - (sf + 2.0));
        out.expect(lacunary_error <= c["lacunary_tolerance"].get<double>(), "lacunary data index not recovered");
    }

    out.tables.push_back(std::move(table));
    std::string trail;
    for (std::size_t i = 0; i < mus.size(); ++i) trail += (i ? ", " : "") + num(mus[i]) + ":" + num(indices[i]);
    out.summary = {{"monotone", monotone}, {"baseline_smooth", base.smooth}, {"lacunary_error", lacunary_error}};
    out.summary["headline"] = "index by mu {" + trail + "}, baseline " + (base.smooth ? "smooth" : "NOT smooth");
    return out;
}

Outcome run_appendix(const Json& c) {
    Outcome out;
    potentials::BallSource ball;
    ball.radius = c["R"].get<double>();
    ball.amplitude = Complex(c["amplitude"].get<double>(), 0.0);
    const potentials::QuadratureOrders vol{c["radial_order"].get<int>(), c["angular_order"].get<int>()};
    const potentials::SurfaceOrders surf{c["polar_order"].get<int>(), c["azimuthal_order"].get<int>()};

    const auto rep = potentials::appendix_pairing([](const potentials::Point3&) { return Complex(1.0, 0.0); }, ball,
                                                  vol, surf);
    const double value = rep.value.real();
    out.expect(std::abs(rep.value.imag()) <= 1e-12 * std::abs(value), "pairing is not real");
    out.expect(value > c["min_value"].get<double>(), "pairing does not exceed " + num(c["min_value"].get<double>()));
    out.expect(rep.relative_deviation <= c["tolerance"].get<double>(), "pairing departs from the radial oracle");

    const int degree = c["harmonic_degree"].get<int>();
    double harmonic = 0.0;
    if (degree > 0) {
        harmonic = std::abs(potentials::appendix_pairing(potentials::zonal_harmonic(degree), ball, vol, surf).value) /
                   std::abs(rep.value);
        out.expect(harmonic <= c["harmonic_tolerance"].get<double>(), "harmonic density pairs to a nonzero value");
    }

    // Far-field decay bound and radial consistency.
    const double boundary = potentials::ball_potential(ball.radius, ball.radius);
    const double far_r = ball.radius + 3.0;
    const double far = std::abs(potentials::newton_potential(ball, {far_r, 0.0, 0.0}, vol)) / std::abs(ball.amplitude);
    out.expect(far <= std::exp(-2.0 * pi * (far_r - ball.radius)) * boundary, "far field exceeds the decay bound");
    double radial_dev = 0.0;
    const Complex ref = potentials::newton_potential(ball, {0.0, 0.0, 1.3 * ball.radius}, vol);
    for (const auto& dir : std::vector<potentials::Point3>{{1, 0, 0}, {0, 1, 0}, {0.6, 0.0, 0.8}, {-0.48, 0.6, 0.64}}) {
        const double r = 1.3 * ball.radius;
        const Complex v = potentials::newton_potential(ball, {r * dir[0], r * dir[1], r * dir[2]}, vol);
        radial_dev = std::max(radial_dev, std::abs(v - ref) / std::abs(ref));
    }
    out.expect(radial_dev <= 1e-8, "potential of a radial source is not radial");

    Json spectral_json = nullptr;
    if (c["spectral_check"].get<bool>()) {
        const auto sc = potentials::spectral_cross_check();
        spectral_json = {{"max_relative_deviation", sc.max_relative_deviation}, {"probe_points", sc.probe_points},
                         {"grid_points", sc.grid_points}, {"extent", sc.extent}, {"gaussian_width", sc.gaussian_width}};
        out.expect(sc.max_relative_deviation <= c["spectral_tolerance"].get<double>(),
                   "torus Bessel potential disagrees with the free-space kernel");
    }

    out.summary = {{"pairing", {{"re", value}, {"im", rep.value.imag()}}},
                   {"oracle", rep.oracle.real()},
                   {"relative_deviation", rep.relative_deviation},
                   {"quadrature_orders", {{"radial", vol.radial}, {"angular", vol.angular},
                                          {"polar", surf.polar}, {"azimuthal", surf.azimuthal}}},
                   {"harmonic_relative_pairing", harmonic},
                   {"far_field", far},
                   {"radial_deviation", radial_dev},
                   {"spectral_cross_check", spectral_json}};
    out.summary["headline"] = "pairing " + num(value) + " oracle " + num(rep.oracle.real()) + " deviation " +
                              num(rep.relative_deviation);
    return out;
}

}  // namespace detail

const std::vector<Experiment>& registry() {
    using namespace detail;
    static const std::vector<Experiment> experiments = {
        {"trace-norm", "trace constants, the adjoint-trace norm identity and the blow-up of the trace norm",
         Json{{"check", "blowup"}, {"s", {0.75}}, {"n", 2}, {"N", 256}, {"L", 16.0}, {"seed", 20240601},
              {"samples", 100}, {"probes", 200}, {"max_frequency", 4.0}, {"closed_form_tolerance", 1e-12},
              {"quadrature_tolerance", 1e-10}, {"identity_band", 0.01}, {"rate_tolerance", 0.05}},
         run_trace_norm},
        {"extension", "trace of the half-space extension against its data",
         Json{{"s", {0.6, 1.0, 1.4}}, {"samples", 50}, {"n", 2}, {"N", 256}, {"L", 16.0}, {"max_frequency", 4.0},
              {"seed", 5}, {"tolerance", 1e-10}},
         run_extension},
        {"recover-density", "densities of boundary-supported distributions",
         Json{{"t", {-1.0, -0.75, -1.25}}, {"kernels", {"exponential", "gaussian"}}, {"samples", 20}, {"n", 2},
              {"N", 128}, {"L", 16.0}, {"max_frequency", 4.0}, {"seed", 9}, {"tolerance", 1e-10},
              {"check_rejection", true}},
         run_recover_density},
        {"bvp", "P1 convergence for Dirichlet, Neumann and mixed problems",
         Json{{"problems", {"dirichlet", "neumann", "mixed"}}, {"domains", {"interval", "square"}},
              {"levels", {8, 16, 32, 64, 128}}, {"l2_rate", 1.9}, {"h1_rate", 0.9}},
         run_bvp},
        {"conormal", "generalized co-normal derivatives: rates, vanishing, lifting, nomination",
         Json{{"check", "canonical-rate"}, {"case", "sin-square"}, {"base", 8}, {"refine", 4}, {"samples", 20},
              {"seed", 3}, {"tolerance", 1e-10}, {"rate", 1.0}, {"mu", 0.6}},
         run_conormal},
        {"green", "first and second Green identities",
         Json{{"check", "first"}, {"samples", 5}, {"base", 8}, {"seed", 4}, {"tolerance", 1e-10},
              {"aggregate_tolerance", 1e-12}},
         run_green},
        {"commutator", "commutator of a Bessel potential with multiplication",
         Json{{"N", {128, 256, 512}}, {"L", 8.0}, {"t", 1.0}, {"s", 0.5}, {"scaling_t", {0.25, 0.5}},
              {"zero_tolerance", 1e-12}, {"refinement_factor", 1.5}, {"scaling_band", 0.2}, {"seed", 12}},
         run_commutator},
        {"product-bound", "Sobolev norm of a product with a Hölder function",
         Json{{"N", {128, 256, 512}}, {"L", 8.0}, {"s", 0.9}, {"mu", 1.0}, {"refinement_factor", 1.5}},
         run_product_bound},
        {"apriori", "constant-coefficient a-priori estimate",
         Json{{"systems", {"scalar", "system"}}, {"s", {-1.0, 0.0, 0.5}}, {"samples", 100}, {"n", 2}, {"N", 64},
              {"L", 7.3}, {"max_frequency", 3.0}, {"seed", 11}},
         run_apriori},
        {"regularity", "spectral-decay regularity of solutions with Hölder coefficients",
         Json{{"mu", {0.9, 0.6, 0.3}}, {"points", 8192}, {"extent", 2.0}, {"lacunary_index", 1.3},
              {"lacunary_tolerance", 0.3}},
         run_regularity},
        {"appendix", "pairing of a boundary density with the Newton potential of a ball",
         Json{{"R", 1.0}, {"amplitude", 1.0}, {"radial_order", 32}, {"angular_order", 64}, {"polar_order", 32},
              {"azimuthal_order", 64}, {"tolerance", 1e-4}, {"min_value", 0.0}, {"harmonic_degree", 2},
              {"harmonic_tolerance", 1e-10}, {"spectral_check", true}, {"spectral_tolerance", 1e-4}},
         run_appendix},
    };
    return experiments;
}

}  // namespace sobolab::lab
