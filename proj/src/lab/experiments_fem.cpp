#include "experiments.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <random>

#include "sobolab/conormal.hpp"
#include "sobolab/fem.hpp"

namespace sobolab::lab::detail {

namespace {

using namespace sobolab::fem;
namespace cn = sobolab::conormal;

constexpr double pi = std::numbers::pi;

Vector scalar(Complex z) {
    Vector v(1);
    v[0] = z;
    return v;
}

DenseMatrix gradient(double gx, double gy, int dimension) {
    DenseMatrix g = DenseMatrix::Zero(1, dimension);
    g(0, 0) = gx;
    if (dimension == 2) g(0, 1) = gy;
    return g;
}

/// Manufactured problem: coefficients, data and the exact solution.
struct Manufactured {
    CoefficientSet coeffs;
    VectorFunction f;
    VectorFunction exact;
    GradientFunction grad;
    /// Outward flux a grad u . nu on Neumann facets.
    std::function<Vector(const Point&, const Point&)> flux;
    std::set<int> dirichlet_tags;
};

Manufactured manufactured(const std::string& problem, const std::string& domain) {
    Manufactured m;
    const bool line = domain == "interval";
    if (!line && domain != "square") throw UsageError("bvp: domains must be interval or square");
    const int dim = line ? 1 : 2;
    if (problem == "dirichlet") {
        m.coeffs = CoefficientSet::laplacian(dim);
        if (line) {
            m.f = [](const Point& x) { return scalar(pi * pi * std::sin(pi * x[0])); };
            m.exact = [](const Point& x) { return scalar(std::sin(pi * x[0]) + x[0]); };
            m.grad = [](const Point& x) { return gradient(pi * std::cos(pi * x[0]) + 1.0, 0.0, 1); };
        } else {
            m.f = [](const Point& x) { return scalar(2 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1])); };
            m.exact = [](const Point& x) { return scalar(std::sin(pi * x[0]) * std::sin(pi * x[1])); };
            m.grad = [](const Point& x) {
                return gradient(pi * std::cos(pi * x[0]) * std::sin(pi * x[1]),
                                pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), 2);
            };
        }
    } else if (problem == "neumann") {
        m.coeffs = CoefficientSet::laplacian(dim, 1, 1.0);
        if (line) {
            m.f = [](const Point& x) {
                const double c = std::cos(pi * x[0]);
                return scalar(pi * pi * c - 1.0 + c + 0.5 * x[0] * x[0]);
            };
            m.exact = [](const Point& x) { return scalar(std::cos(pi * x[0]) + 0.5 * x[0] * x[0]); };
            m.grad = [](const Point& x) { return gradient(-pi * std::sin(pi * x[0]) + x[0], 0.0, 1); };
        } else {
            m.f = [](const Point& x) {
                return scalar((2 * pi * pi + 1.0) * std::cos(pi * x[0]) * std::cos(pi * x[1]));
            };
            m.exact = [](const Point& x) { return scalar(std::cos(pi * x[0]) * std::cos(pi * x[1])); };
            m.grad = [](const Point& x) {
                return gradient(-pi * std::sin(pi * x[0]) * std::cos(pi * x[1]),
                                -pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), 2);
            };
        }
    } else if (problem == "mixed") {
        // u = x(2 - x): fixed at x = 0, flux-free elsewhere.
        m.coeffs = CoefficientSet::laplacian(dim);
        m.f = [](const Point&) { return scalar(2.0); };
        m.exact = [](const Point& x) { return scalar(x[0] * (2.0 - x[0])); };
        m.grad = [dim](const Point& x) { return gradient(2.0 - 2.0 * x[0], 0.0, dim); };
        m.dirichlet_tags = {line ? 1 : 4};
    } else {
        throw UsageError("bvp: problems must be dirichlet, neumann or mixed");
    }
    m.flux = [grad = m.grad, dim](const Point& x, const Point& nu) {
        const DenseMatrix g = grad(x);
        Complex v = g(0, 0) * nu[0];
        if (dim == 2) v += g(0, 1) * nu[1];
        return scalar(v);
    };
    return m;
}

Mesh domain_mesh(const std::string& domain, int n) {
    return domain == "interval" ? Mesh::interval(0.0, 1.0, n) : Mesh::unit_square(n);
}

Vector solve_manufactured(const Manufactured& m, const FemSystem& sys, const std::string& problem) {
    const auto& mesh = sys.mesh;
    const Vector load = load_vector(mesh, 1, m.f);
    if (problem == "dirichlet") return solve_dirichlet(sys, load, m.exact);
    // Outward normals by tag: interval 1 left, 2 right; square 1 bottom, 2 right, 3 top, 4 left.
    const std::map<int, Point> normals =
        mesh.dimension() == 1 ? std::map<int, Point>{{1, {-1.0, 0.0}}, {2, {1.0, 0.0}}}
                              : std::map<int, Point>{{1, {0.0, -1.0}}, {2, {1.0, 0.0}}, {3, {0.0, 1.0}}, {4, {-1.0, 0.0}}};
    AggregateRHS rhs{load, Vector::Zero(load.size())};
    for (const auto& [tag, nu] : normals)
        rhs.boundary += boundary_load(mesh, 1, [&, nu](const Point& x) { return m.flux(x, nu); }, {tag});
    if (problem == "neumann") return solve_neumann(sys, rhs);
    return solve_mixed(sys, rhs, m.dirichlet_tags, m.exact);
}

}  // namespace

Outcome run_bvp(const Json& c) {
    Outcome out;
    const auto levels = c["levels"].get<std::vector<int>>();
    if (levels.size() < 2) throw UsageError("bvp: levels must list at least two meshes");
    const double l2_target = c["l2_rate"].get<double>();
    const double h1_target = c["h1_rate"].get<double>();
    Table errors{"bvp_errors", {"problem", "domain", "cells_per_side", "h", "l2_error", "h1_error"}, {}};
    Table rates{"bvp_rates", {"problem", "domain", "l2_rate", "h1_rate"}, {}};
    double worst_l2 = 1e300, worst_h1 = 1e300;
    for (const auto& domain : c["domains"].get<std::vector<std::string>>()) {
        for (const auto& problem : c["problems"].get<std::vector<std::string>>()) {
            const auto m = manufactured(problem, domain);
            std::vector<double> l2, h1;
            for (int n : levels) {
                const auto mesh = domain_mesh(domain, n);
                const auto sys = assemble(m.coeffs, mesh);
                const Vector u = solve_manufactured(m, sys, problem);
                l2.push_back(l2_error(mesh, 1, u, m.exact));
                h1.push_back(h1_seminorm_error(mesh, 1, u, m.grad));
                errors.rows.push_back({problem, domain, n, mesh.mesh_size(), l2.back(), h1.back()});
            }
            const auto r2 = observed_rates(l2);
            const auto r1 = observed_rates(h1);
            const double min2 = *std::min_element(r2.begin(), r2.end());
            const double min1 = *std::min_element(r1.begin(), r1.end());
            rates.rows.push_back({problem, domain, min2, min1});
            out.expect(min2 >= l2_target, problem + " on " + domain + ": L2 rate " + num(min2));
            out.expect(min1 >= h1_target, problem + " on " + domain + ": H1 rate " + num(min1));
            worst_l2 = std::min(worst_l2, min2);
            worst_h1 = std::min(worst_h1, min1);
        }
    }
    out.tables.push_back(std::move(errors));
    out.tables.push_back(std::move(rates));
    out.summary = {{"min_l2_rate", worst_l2}, {"min_h1_rate", worst_h1}};
    out.summary["headline"] = "min L2 rate " + num(worst_l2) + ", min H1 rate " + num(worst_h1);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Two-component system on the unit square with complex, nonsymmetric
/// lower-order terms.
CoefficientSet system_preset() {
    const Complex i(0.0, 1.0);
    CoefficientSet s;
    s.dimension = 2;
    s.components = 2;
    auto constant = [](DenseMatrix m) { return [m](const Point&) { return m; }; };
    DenseMatrix diag(2, 2), cross(2, 2), b0(2, 2), b1(2, 2), d0(2, 2), d1(2, 2), react(2, 2);
    diag << 2.0, 0.3 + 0.1 * i, -0.2 + 0.1 * i, 1.5;
    cross << 0.2, 0.0, 0.1 * i, 0.1;
    b0 << 0.5, 0.2 * i, 0.0, -0.3;
    b1 << 0.1, 0.0, 0.4 - 0.1 * i, 0.2;
    d0 << 0.1 * i, 0.0, 0.2, 0.0;
    d1 << 0.0, -0.15, 0.0, 0.05 * i;
    react << 1.0, 0.2 + 0.1 * i, -0.1, 1.2;
    s.a[0][0] = constant(diag);
    s.a[1][1] = constant(diag);
    s.a[0][1] = constant(cross);
    s.a[1][0] = constant(cross.transpose());
    s.b = {constant(b0), constant(b1)};
    s.d = {constant(d0), constant(d1)};
    s.c = constant(react);
    return s;
}

Vector random_vector(Eigen::Index size, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(size);
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return v;
}

/// Meshes used by the identity checks: an interval, the square and the
/// two-component system on the square.
struct Case {
    std::string name;
    FemSystem system;
};

std::vector<Case> identity_cases(int base) {
    std::vector<Case> cases;
    cases.push_back({"interval", assemble(CoefficientSet::laplacian(1, 1, 1.0), Mesh::interval(0.0, 1.0, 2 * base))});
    cases.push_back({"square", assemble(CoefficientSet::scalar_diffusion(
                                            2, [](const Point& x) { return 1.0 + 0.5 * x[0] * x[1]; }, 0.5),
                                        Mesh::unit_square(base))});
    cases.push_back({"system", assemble(system_preset(), Mesh::unit_square(base))});
    return cases;
}

double relative(const Vector& a, const Vector& b) {
    const double scale = b.norm();
    return scale > 0.0 ? (a - b).norm() / scale : a.norm();
}

Outcome conormal_aggregate(const Json& c) {
    Outcome out;
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    const double tol = c["tolerance"].get<double>();
    Table table{"aggregate_vanishing", {"case", "max_trace_norm", "samples"}, {}};
    double worst = 0.0;
    for (const auto& cs : identity_cases(c["base"].get<int>())) {
        const cn::BoundarySpace space(cs.system.mesh, cs.system.components());
        double cmax = 0.0;
        for (int k = 0; k < c["samples"].get<int>(); ++k) {
            const Vector u = random_vector(cs.system.dofs(), rng);
            const auto t = cn::generalized_conormal(cs.system, u, cn::aggregate_extension(cs.system, u));
            cmax = std::max(cmax, space.norm(t.coefficients));
        }
        table.rows.push_back({cs.name, cmax, c["samples"].get<int>()});
        worst = std::max(worst, cmax);
    }
    out.expect(worst <= tol, "aggregate co-normal derivative does not vanish");
    out.tables.push_back(std::move(table));
    out.summary = {{"max_trace_norm", worst}};
    out.summary["headline"] = "max ||T(aggregate, u)|| = " + num(worst);
    return out;
}

/// Dirichlet solution of -div(a grad u) = f on the square.
struct SquareSolution {
    FemSystem system;
    VectorFunction f;
    Vector u;
    std::function<Vector(const Point&, const Point&)> flux;
};

SquareSolution square_solution(const std::string& name, int n, double mu) {
    const auto mesh = Mesh::unit_square(n);
    SquareSolution s;
    if (name == "sin-square") {
        s.system = assemble(CoefficientSet::laplacian(2), mesh);
        s.f = [](const Point& x) { return scalar(2 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1])); };
        s.flux = [](const Point& x, const Point& nu) {
            return scalar(pi * (nu[0] * std::cos(pi * x[0]) * std::sin(pi * x[1]) +
                                nu[1] * std::sin(pi * x[0]) * std::cos(pi * x[1])));
        };
    } else if (name == "holder-square") {
        // a = 1 + |x - 1/2|^mu / 2 and u = sin(pi x) sin(pi y).
        auto a = [mu](double x) { return 1.0 + 0.5 * std::pow(std::abs(x - 0.5), mu); };
        auto da = [mu](double x) {
            const double r = x - 0.5;
            return r == 0.0 ? 0.0 : 0.5 * mu * std::pow(std::abs(r), mu - 1.0) * (r > 0 ? 1.0 : -1.0);
        };
        s.system = assemble(CoefficientSet::scalar_diffusion(2, [a](const Point& x) { return a(x[0]); }), mesh);
        s.f = [a, da](const Point& x) {
            const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
            return scalar(2 * pi * pi * a(x[0]) * sx * sy - da(x[0]) * pi * std::cos(pi * x[0]) * sy);
        };
        s.flux = [a](const Point& x, const Point& nu) {
            return scalar(a(x[0]) * pi * (nu[0] * std::cos(pi * x[0]) * std::sin(pi * x[1]) +
                                          nu[1] * std::sin(pi * x[0]) * std::cos(pi * x[1])));
        };
    } else {
        throw UsageError("conormal: case must be sin-square or holder-square");
    }
    s.u = solve_dirichlet(s.system, load_vector(mesh, 1, s.f), [](const Point&) { return scalar(0.0); });
    return s;
}

Outcome conormal_rate(const Json& c) {
    Outcome out;
    const auto name = c["case"].get<std::string>();
    const double mu = c["mu"].get<double>();
    Table table{"canonical_rate", {"cells_per_side", "h", "canonical_error", "classical_error"}, {}};
    std::vector<double> errors;
    int n = c["base"].get<int>();
    for (int k = 0; k <= c["refine"].get<int>(); ++k, n *= 2) {
        const auto s = square_solution(name, n, mu);
        const auto canonical = cn::canonical_conormal(s.system, s.u, s.f);
        const auto classical = cn::classical_conormal(s.system, s.u);
        errors.push_back(cn::boundary_l2_error(s.system.mesh, 1, canonical, s.flux));
        table.rows.push_back({n, s.system.mesh.mesh_size(), errors.back(),
                              cn::boundary_l2_error(s.system.mesh, 1, classical, s.flux)});
    }
    const auto rates = observed_rates(errors);
    const double rate = *std::min_element(rates.begin(), rates.end());
    out.expect(rate >= c["rate"].get<double>(), "canonical co-normal converges at rate " + num(rate));
    out.tables.push_back(std::move(table));
    out.summary = {{"min_rate", rate}, {"finest_error", errors.back()}};
    out.summary["headline"] = "canonical flux error rate " + num(rate) + ", finest error " + num(errors.back());
    return out;
}

Outcome conormal_lifting(const Json& c) {
    Outcome out;
    const double tol = c["tolerance"].get<double>();
    Table table{"lifting", {"case", "relative_difference"}, {}};
    double worst = 0.0;
    auto record = [&](const std::string& name, const FemSystem& sys, const Vector& u, const cn::ExtensionChoice& ch) {
        const auto zero = cn::generalized_conormal(sys, u, ch, cn::Lifting::zero_interior);
        const auto harmonic = cn::generalized_conormal(sys, u, ch, cn::Lifting::discrete_harmonic);
        // Scaled by the larger of the trace and the boundary part of f_ext, so
        // that flux-free problems (T near zero) are not judged on roundoff.
        const cn::BoundarySpace space(sys.mesh, sys.components());
        const double scale =
            std::max(zero.coefficients.norm(), space.solve_mass(space.restrict(ch.functional)).norm());
        const double d = (harmonic.coefficients - zero.coefficients).norm() / scale;
        table.rows.push_back({name, d});
        worst = std::max(worst, d);
    };
    const int base = c["base"].get<int>();
    for (int n : {base, 2 * base}) {
        const auto s = square_solution("sin-square", n, c["mu"].get<double>());
        record("dirichlet-square-" + std::to_string(n), s.system, s.u, cn::canonical_extension(s.system, s.f));
    }
    for (const std::string problem : {"dirichlet", "neumann", "mixed"}) {
        for (const std::string domain : {"interval", "square"}) {
            const auto m = manufactured(problem, domain);
            const auto sys = assemble(m.coeffs, domain_mesh(domain, 2 * base));
            const Vector u = solve_manufactured(m, sys, problem);
            record(problem + "-" + domain, sys, u, cn::canonical_extension(sys, m.f));
        }
    }
    // Nonsymmetric system: the trace of the classical extension.
    const auto sys = assemble(system_preset(), Mesh::unit_square(base));
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    const Vector load = random_vector(sys.dofs(), rng);
    const Vector u = solve_dirichlet(sys, load, [](const Point& x) {
        Vector g(2);
        g << Complex(x[0], x[1]), Complex(1.0 - x[1], 0.5 * x[0]);
        return g;
    });
    record("system-square", sys, u, cn::classical_extension(sys, u));

    out.expect(worst <= tol, "liftings disagree beyond " + num(tol));
    out.tables.push_back(std::move(table));
    out.summary = {{"max_relative_difference", worst}};
    out.summary["headline"] = "max lifting difference " + num(worst);
    return out;
}

Outcome conormal_nomination(const Json& c) {
    Outcome out;
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    const double tol = c["tolerance"].get<double>();
    Table table{"nomination", {"case", "max_relative_error", "samples"}, {}};
    double worst = 0.0;
    for (const auto& cs : identity_cases(c["base"].get<int>())) {
        const cn::BoundarySpace space(cs.system.mesh, cs.system.components());
        double cmax = 0.0;
        for (int k = 0; k < c["samples"].get<int>(); ++k) {
            const Vector u = random_vector(cs.system.dofs(), rng);
            cn::ConormalTrace nominated;
            nominated.coefficients = random_vector(space.size(), rng);
            const auto choice = cn::nominate_conormal(cs.system, u, nominated);
            const auto recovered = cn::generalized_conormal(cs.system, u, choice);
            cmax = std::max(cmax, relative(recovered.coefficients, nominated.coefficients));
        }
        table.rows.push_back({cs.name, cmax, c["samples"].get<int>()});
        worst = std::max(worst, cmax);
    }
    out.expect(worst <= tol, "recovered co-normal differs from the nominated one");
    out.tables.push_back(std::move(table));
    out.summary = {{"max_relative_error", worst}};
    out.summary["headline"] = "max nomination round-trip error " + num(worst);
    return out;
}

}  // namespace

Outcome run_conormal(const Json& c) {
    const auto check = c["check"].get<std::string>();
    if (check == "canonical-rate") return conormal_rate(c);
    if (check == "aggregate-vanishing") return conormal_aggregate(c);
    if (check == "lifting") return conormal_lifting(c);
    if (check == "nomination") return conormal_nomination(c);
    throw UsageError("conormal: check must be canonical-rate, aggregate-vanishing, lifting or nomination");
}

namespace {

Outcome green_first(const Json& c) {
    Outcome out;
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    const double tol = c["tolerance"].get<double>();
    const int base = c["base"].get<int>();
    Table table{"first_green", {"case", "extension", "max_residual"}, {}};
    double worst = 0.0;
    auto record = [&](const std::string& name, const FemSystem& sys, const Vector& u, const cn::ExtensionChoice& ch) {
        const auto t = cn::generalized_conormal(sys, u, ch);
        const double r = cn::first_green_residual(sys, u, ch, t);
        table.rows.push_back({name, cn::to_string(ch.kind), r});
        worst = std::max(worst, r);
    };
    const auto s = square_solution("sin-square", base, 1.0);
    record("dirichlet-square", s.system, s.u, cn::canonical_extension(s.system, s.f));
    record("dirichlet-square", s.system, s.u, cn::classical_extension(s.system, s.u));
    for (const auto& cs : identity_cases(base)) {
        const cn::BoundarySpace space(cs.system.mesh, cs.system.components());
        for (int k = 0; k < c["samples"].get<int>(); ++k) {
            const Vector u = random_vector(cs.system.dofs(), rng);
            cn::ConormalTrace nominated;
            nominated.coefficients = random_vector(space.size(), rng);
            record(cs.name, cs.system, u, cn::classical_extension(cs.system, u));
            record(cs.name, cs.system, u, cn::nominate_conormal(cs.system, u, nominated));
            record(cs.name, cs.system, u, cn::aggregate_extension(cs.system, u));
        }
    }
    out.expect(worst <= tol, "first Green identity residual above " + num(tol));
    out.tables.push_back(std::move(table));
    out.summary = {{"max_residual", worst}};
    out.summary["headline"] = "max first Green residual " + num(worst);
    return out;
}

Outcome green_second(const Json& c) {
    Outcome out;
    std::mt19937_64 rng(c["seed"].get<std::uint64_t>());
    const double tol = c["tolerance"].get<double>();
    const double agg_tol = c["aggregate_tolerance"].get<double>();
    Table table{"second_green", {"case", "identity", "max_residual"}, {}};
    double worst_agg = 0.0, worst_can = 0.0;
    for (const auto& cs : identity_cases(c["base"].get<int>())) {
        const auto adjoint = assemble_adjoint(cs.system.coefficients, cs.system.mesh);
        const cn::BoundarySpace space(cs.system.mesh, cs.system.components());
        double agg = 0.0, can = 0.0;
        for (int k = 0; k < c["samples"].get<int>(); ++k) {
            const Vector u = random_vector(cs.system.dofs(), rng);
            const Vector v = random_vector(cs.system.dofs(), rng);
            agg = std::max(agg, aggregate_second_green_residual(cs.system, adjoint, u, v));
            cn::ConormalTrace t;
            t.coefficients = random_vector(space.size(), rng);
            can = std::max(can, cn::second_green_residual(cs.system, adjoint,
                                                          {u, cn::classical_extension(cs.system, u), v,
                                                           cn::classical_extension(adjoint, v)}));
            can = std::max(can, cn::second_green_residual(cs.system, adjoint,
                                                          {u, cn::nominate_conormal(cs.system, u, t), v,
                                                           cn::classical_extension(adjoint, v)}));
        }
        table.rows.push_back({cs.name, "aggregate", agg});
        table.rows.push_back({cs.name, "recovered traces", can});
        worst_agg = std::max(worst_agg, agg);
        worst_can = std::max(worst_can, can);
    }
    out.expect(worst_agg <= agg_tol, "aggregate second Green identity residual above " + num(agg_tol));
    out.expect(worst_can <= tol, "second Green identity with recovered traces above " + num(tol));
    out.tables.push_back(std::move(table));
    out.summary = {{"max_aggregate_residual", worst_agg}, {"max_recovered_residual", worst_can}};
    out.summary["headline"] = "aggregate " + num(worst_agg) + ", recovered traces " + num(worst_can);
    return out;
}

}  // namespace

Outcome run_green(const Json& c) {
    const auto check = c["check"].get<std::string>();
    if (check == "first") return green_first(c);
    if (check == "second") return green_second(c);
    throw UsageError("green: check must be first or second");
}

}  // namespace sobolab::lab::detail
