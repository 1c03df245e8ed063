#include "sobolab/conormal.hpp"

#include <map>
#include <ostream>

#include <Eigen/SparseLU>

namespace sobolab::conormal {

namespace {

constexpr double kConsistencyTolerance = 1e-8;

std::vector<bool> boundary_dof_mask(const FemSystem& sys) {
    std::vector<bool> mask(static_cast<std::size_t>(sys.dofs()), false);
    for (auto i : fem::node_dofs(sys.mesh.boundary_nodes(), sys.components())) mask[static_cast<std::size_t>(i)] = true;
    return mask;
}

double interior_defect(const FemSystem& sys, const Vector& residual, const Vector& au, const Vector& f) {
    const auto mask = boundary_dof_mask(sys);
    double worst = 0.0;
    double scale = 0.0;
    for (Eigen::Index i = 0; i < sys.dofs(); ++i) {
        if (mask[static_cast<std::size_t>(i)]) continue;
        worst = std::max(worst, std::abs(residual[i]));
        scale = std::max({scale, std::abs(au[i]), std::abs(f[i])});
    }
    return scale > 0.0 ? worst / scale : worst;
}

void require_sizes(const FemSystem& sys, const Vector& u) {
    if (u.size() != sys.dofs()) throw GridMismatch("field does not match the system");
}

/// r_i = \int_facets flux . phi_i for the co-normal flux of `coeffs`.
Vector flux_functional(const FemSystem& sys, const fem::CoefficientSet& coeffs, const Vector& u,
                       const BoundarySpace& space) {
    const auto& mesh = sys.mesh;
    const int m = sys.components();
    const int n = mesh.dimension();
    std::map<int, Eigen::Index> pos;
    for (std::size_t i = 0; i < space.nodes().size(); ++i) pos[space.nodes()[i]] = static_cast<Eigen::Index>(i);
    Vector r = Vector::Zero(space.size());

    for (const auto& f : mesh.facets()) {
        const auto e = static_cast<std::size_t>(f.cell);
        const auto g = mesh.basis_gradients(e);
        const auto& cell = mesh.cells()[e];
        DenseMatrix grad = DenseMatrix::Zero(m, n);
        for (int a = 0; a < mesh.nodes_per_cell(); ++a)
            for (int j = 0; j < n; ++j) grad.col(j) += g[a][j] * u.segment(static_cast<Eigen::Index>(cell[a]) * m, m);
        auto flux = [&](const Point& x, const Vector& ux) {
            Vector out = Vector::Zero(m);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) out += f.normal[i] * (coeffs.eval_a(i, j, x) * grad.col(j));
                out += f.normal[i] * (coeffs.eval_d(i, x) * ux);
            }
            return out;
        };
        if (n == 1) {
            const int node = f.nodes[0];
            r.segment(pos.at(node) * m, m) += flux(mesh.vertices()[node], u.segment(static_cast<Eigen::Index>(node) * m, m));
            continue;
        }
        const Point& p = mesh.vertices()[f.nodes[0]];
        const Point& q = mesh.vertices()[f.nodes[1]];
        const Vector up = u.segment(static_cast<Eigen::Index>(f.nodes[0]) * m, m);
        const Vector uq = u.segment(static_cast<Eigen::Index>(f.nodes[1]) * m, m);
        const double root = 0.5 * std::sqrt(0.6);
        const std::array<double, 3> ts{0.5 - root, 0.5, 0.5 + root};
        const std::array<double, 3> ws{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        for (int k = 0; k < 3; ++k) {
            const double t = ts[k];
            const Point x{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
            const Vector fx = flux(x, (1.0 - t) * up + t * uq);
            const double w = ws[k] * f.measure;
            r.segment(pos.at(f.nodes[0]) * m, m) += w * (1.0 - t) * fx;
            r.segment(pos.at(f.nodes[1]) * m, m) += w * t * fx;
        }
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

BoundarySpace::BoundarySpace(const Mesh& mesh, int components)
    : nodes_(mesh.boundary_nodes()),
      components_(components),
      dofs_(fem::node_dofs(nodes_, components)),
      total_dofs_(static_cast<Eigen::Index>(mesh.node_count()) * components),
      mass_(fem::boundary_mass(mesh, components, nodes_)),
      factor_(std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>()) {
    factor_->compute(mass_);
    if (factor_->info() != Eigen::Success) throw NumericalFailure("boundary mass matrix is singular");
}

Vector BoundarySpace::solve_mass(const Vector& r) const {
    if (r.size() != size()) throw GridMismatch("boundary vector has the wrong size");
    return factor_->solve(r);
}

Vector BoundarySpace::restrict(const Vector& full) const {
    if (full.size() != total_dofs_) throw GridMismatch("nodal vector has the wrong size");
    Vector out(size());
    for (std::size_t i = 0; i < dofs_.size(); ++i) out[static_cast<Eigen::Index>(i)] = full[dofs_[i]];
    return out;
}

Vector BoundarySpace::prolong(const Vector& boundary) const {
    if (boundary.size() != size()) throw GridMismatch("boundary vector has the wrong size");
    Vector out = Vector::Zero(total_dofs_);
    for (std::size_t i = 0; i < dofs_.size(); ++i) out[dofs_[i]] = boundary[static_cast<Eigen::Index>(i)];
    return out;
}

double BoundarySpace::norm(const Vector& t) const { return std::sqrt(std::abs(t.dot(mass_ * t))); }

std::string to_string(ExtensionKind kind) {
    switch (kind) {
        case ExtensionKind::aggregate: return "aggregate";
        case ExtensionKind::canonical: return "canonical";
        case ExtensionKind::classical: return "classical";
        case ExtensionKind::nominated: return "nominated";
        case ExtensionKind::custom: return "custom";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

ConormalTrace classical_conormal(const FemSystem& sys, const Vector& u) {
    require_sizes(sys, u);
    const BoundarySpace space(sys.mesh, sys.components());
    return {space.solve_mass(flux_functional(sys, sys.coefficients, u, space))};
}

ConormalTrace modified_conormal(const FemSystem& sys, const Vector& v) {
    require_sizes(sys, v);
    const BoundarySpace space(sys.mesh, sys.components());
    return {space.solve_mass(flux_functional(sys, sys.coefficients.adjoint(), v, space))};
}

ExtensionChoice aggregate_extension(const FemSystem& sys, const Vector& u) {
    return {ExtensionKind::aggregate, fem::apply_aggregate(sys, u)};
}

ExtensionChoice classical_extension(const FemSystem& sys, const Vector& u) {
    auto choice = nominate_conormal(sys, u, classical_conormal(sys, u));
    choice.kind = ExtensionKind::classical;
    return choice;
}

ExtensionChoice canonical_extension(const FemSystem& sys, const VectorFunction& f, double t) {
    if (!(t > -0.5 && t < 0.5))
        throw DomainError("canonical extension: defined only for -1/2 < t < 1/2");
    return {ExtensionKind::canonical, fem::load_vector(sys.mesh, sys.components(), f)};
}

ExtensionChoice nominate_conormal(const FemSystem& sys, const Vector& u, const ConormalTrace& t) {
    require_sizes(sys, u);
    const BoundarySpace space(sys.mesh, sys.components());
    if (t.coefficients.size() != space.size()) throw GridMismatch("trace does not match the boundary");
    return {ExtensionKind::nominated, fem::apply_aggregate(sys, u) - space.prolong(space.mass() * t.coefficients)};
}

ExtensionChoice custom_extension(const Vector& functional) { return {ExtensionKind::custom, functional}; }

ConormalTrace generalized_conormal(const FemSystem& sys, const Vector& u, const ExtensionChoice& choice,
                                   Lifting lifting) {
    require_sizes(sys, u);
    if (choice.functional.size() != sys.dofs()) throw GridMismatch("extension does not match the system");
    const BoundarySpace space(sys.mesh, sys.components());
    const Vector au = fem::apply_aggregate(sys, u);
    const Vector residual = au - choice.functional;
    const double defect = interior_defect(sys, residual, au, choice.functional);
    if (defect > kConsistencyTolerance)
        throw InconsistentData("extension disagrees with the operator on interior test functions", defect);

    Vector r = space.restrict(residual);
    if (lifting == Lifting::discrete_harmonic) {
        // Lifted test functions E w = w_B - K_II^{-1} K_IB w_B, so
        // r = R_B - K_IB^T K_II^{-T} R_I.
        const auto mask = boundary_dof_mask(sys);
        std::vector<Eigen::Index> interior;
        for (Eigen::Index i = 0; i < sys.dofs(); ++i)
            if (!mask[static_cast<std::size_t>(i)]) interior.push_back(i);
        if (!interior.empty()) {
            std::vector<Eigen::Index> ipos(static_cast<std::size_t>(sys.dofs()), -1);
            std::vector<Eigen::Index> bpos(static_cast<std::size_t>(sys.dofs()), -1);
            for (std::size_t i = 0; i < interior.size(); ++i) ipos[interior[i]] = static_cast<Eigen::Index>(i);
            const auto bdofs = fem::node_dofs(space.nodes(), sys.components());
            for (std::size_t i = 0; i < bdofs.size(); ++i) bpos[bdofs[i]] = static_cast<Eigen::Index>(i);
            std::vector<Eigen::Triplet<Complex>> tii;
            std::vector<Eigen::Triplet<Complex>> tib;
            for (Eigen::Index k = 0; k < sys.matrix.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(sys.matrix, k); it; ++it) {
                    const auto row = ipos[it.row()];
                    if (row < 0) continue;
                    if (ipos[it.col()] >= 0) tii.emplace_back(row, ipos[it.col()], it.value());
                    else tib.emplace_back(row, bpos[it.col()], it.value());
                }
            const auto ni = static_cast<Eigen::Index>(interior.size());
            SparseMatrix kii(ni, ni);
            SparseMatrix kib(ni, space.size());
            kii.setFromTriplets(tii.begin(), tii.end());
            kib.setFromTriplets(tib.begin(), tib.end());
            const SparseMatrix kiit = kii.transpose();
            Eigen::SparseLU<SparseMatrix> lu(kiit);
            if (lu.info() != Eigen::Success) throw NumericalFailure("interior block is singular");
            Vector ri(ni);
            for (Eigen::Index i = 0; i < ni; ++i) ri[i] = residual[interior[static_cast<std::size_t>(i)]];
            const Vector y = lu.solve(ri);
            r -= kib.transpose() * y;
        }
    }
    return {space.solve_mass(r)};
}

ConormalTrace canonical_conormal(const FemSystem& sys, const Vector& u, const VectorFunction& f) {
    return generalized_conormal(sys, u, canonical_extension(sys, f, 0.0));
}

double first_green_residual(const FemSystem& sys, const Vector& u, const ExtensionChoice& choice,
                            const ConormalTrace& trace) {
    const BoundarySpace space(sys.mesh, sys.components());
    const Vector au = fem::apply_aggregate(sys, u);
    const Vector boundary = space.prolong(space.mass() * trace.coefficients);
    const Vector r = au - choice.functional - boundary;
    const double scale = std::max({au.cwiseAbs().maxCoeff(), choice.functional.cwiseAbs().maxCoeff(),
                                   boundary.cwiseAbs().maxCoeff()});
    const double worst = r.cwiseAbs().maxCoeff();
    return scale > 0.0 ? worst / scale : worst;
}

ConormalDifference conormal_difference(const FemSystem& sys, const Vector& u, const ExtensionChoice& first,
                                       const ExtensionChoice& second) {
    const BoundarySpace space(sys.mesh, sys.components());
    ConormalDifference out;
    out.direct = {generalized_conormal(sys, u, first).coefficients - generalized_conormal(sys, u, second).coefficients};
    // f2 - f1 must be supported on the boundary; its density is M_b^{-1} (f2 - f1)_B.
    const Vector jump = second.functional - first.functional;
    const double defect = interior_defect(sys, jump, first.functional, second.functional);
    if (defect > kConsistencyTolerance)
        throw InconsistentData("extensions differ on interior test functions", defect);
    out.recovered = {space.solve_mass(space.restrict(jump))};
    const double scale = std::max(space.norm(out.recovered.coefficients), space.norm(out.direct.coefficients));
    const double diff = space.norm(out.direct.coefficients - out.recovered.coefficients);
    out.mismatch = scale > 0.0 ? diff / scale : diff;
    return out;
}

double second_green_residual(const FemSystem& sys, const FemSystem& adjoint, const SecondGreenInputs& in) {
    const BoundarySpace space(sys.mesh, sys.components());
    const Vector t = generalized_conormal(sys, in.u, in.choice).coefficients;
    const Vector ts = generalized_conormal(adjoint, in.v, in.adjoint_choice).coefficients;
    const Vector ub = space.restrict(in.u);
    const Vector vb = space.restrict(in.v);
    // Eigen's dot conjugates its left operand: a.dot(b) = a^H b.
    const Complex f_v = in.v.dot(in.choice.functional);
    const Complex u_fs = in.adjoint_choice.functional.dot(in.u);
    const Complex u_ts = ts.dot(space.mass() * ub);
    const Complex t_v = vb.dot(space.mass() * t);
    const double scale = std::abs(f_v) + std::abs(u_fs) + std::abs(u_ts) + std::abs(t_v);
    const double r = std::abs((f_v - u_fs) - (u_ts - t_v));
    return scale > 0.0 ? r / scale : r;
}

double boundary_l2_error(const Mesh& mesh, int components, const ConormalTrace& trace,
                         const std::function<Vector(const Point&, const Point&)>& exact_flux) {
    const BoundarySpace space(mesh, components);
    if (trace.coefficients.size() != space.size()) throw GridMismatch("trace does not match the boundary");
    std::map<int, Eigen::Index> pos;
    for (std::size_t i = 0; i < space.nodes().size(); ++i) pos[space.nodes()[i]] = static_cast<Eigen::Index>(i);
    const int m = components;
    CompensatedSum<double> acc;
    for (const auto& f : mesh.facets()) {
        if (mesh.dimension() == 1) {
            const int node = f.nodes[0];
            acc.add((trace.coefficients.segment(pos.at(node) * m, m) - exact_flux(mesh.vertices()[node], f.normal))
                        .squaredNorm());
            continue;
        }
        const Point& p = mesh.vertices()[f.nodes[0]];
        const Point& q = mesh.vertices()[f.nodes[1]];
        const Vector tp = trace.coefficients.segment(pos.at(f.nodes[0]) * m, m);
        const Vector tq = trace.coefficients.segment(pos.at(f.nodes[1]) * m, m);
        // 5-point Gauss along the facet.
        const double x1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double x2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        const std::array<double, 5> xs{-x2, -x1, 0.0, x1, x2};
        const std::array<double, 5> ws{w2, w1, 128.0 / 225.0, w1, w2};
        for (int k = 0; k < 5; ++k) {
            const double t = 0.5 * (1.0 + xs[k]);
            const Point x{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
            acc.add(0.5 * ws[k] * f.measure * ((1.0 - t) * tp + t * tq - exact_flux(x, f.normal)).squaredNorm());
        }
    }
    return std::sqrt(acc.value());
}

void write_trace_csv(std::ostream& out, const Mesh& mesh, int components, const ConormalTrace& trace) {
    const BoundarySpace space(mesh, components);
    if (trace.coefficients.size() != space.size()) throw GridMismatch("trace does not match the boundary");
    const Vector dual = space.mass() * trace.coefficients;
    const Vector lumped_mass = space.mass() * Vector::Ones(space.size());
    out.precision(17);
    out << "node,x,y,component,coef_re,coef_im,lumped_re,lumped_im\n";
    for (std::size_t i = 0; i < space.nodes().size(); ++i) {
        const int node = space.nodes()[i];
        for (int k = 0; k < components; ++k) {
            const auto j = static_cast<Eigen::Index>(i) * components + k;
            const Complex c = trace.coefficients[j];
            const Complex l = dual[j] / lumped_mass[j];
            out << node << ',' << mesh.vertices()[node][0] << ',' << mesh.vertices()[node][1] << ',' << k << ','
                << c.real() << ',' << c.imag() << ',' << l.real() << ',' << l.imag() << '\n';
        }
    }
}

}  // namespace sobolab::conormal
