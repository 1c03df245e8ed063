#include "sobolab/fem.hpp"

#include <limits>

#include <Eigen/SparseLU>

namespace sobolab::fem {

namespace {

constexpr double kResidualTolerance = 1e-10;
constexpr double kCompatibilityTolerance = 1e-10;

double abs_row_norm(const SparseMatrix& a) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

/// Rows and columns of `a` selected by the index lists.
SparseMatrix submatrix(const SparseMatrix& a, const std::vector<Eigen::Index>& rows,
                       const std::vector<Eigen::Index>& cols) {
    std::vector<Eigen::Index> rpos(a.rows(), -1);
    std::vector<Eigen::Index> cpos(a.cols(), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) rpos[rows[i]] = static_cast<Eigen::Index>(i);
    for (std::size_t i = 0; i < cols.size(); ++i) cpos[cols[i]] = static_cast<Eigen::Index>(i);
    std::vector<Eigen::Triplet<Complex>> t;
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it)
            if (rpos[it.row()] >= 0 && cpos[it.col()] >= 0) t.emplace_back(rpos[it.row()], cpos[it.col()], it.value());
    SparseMatrix s(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    s.setFromTriplets(t.begin(), t.end());
    s.makeCompressed();
    return s;
}

Vector gather(const Vector& v, const std::vector<Eigen::Index>& idx) {
    Vector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
    return out;
}

Vector lu_solve(const SparseMatrix& k, const Vector& rhs) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(k);
    if (lu.info() != Eigen::Success)
        throw NumericalFailure("sparse LU factorization failed: " + lu.lastErrorMessage(),
                               std::numeric_limits<double>::infinity());
    Vector x = lu.solve(rhs);
    const double rn = rhs.norm();
    const double res = (k * x - rhs).norm();
    // Lower bound on the condition number from this solve.
    const double cond = rn > 0.0 ? abs_row_norm(k) * x.norm() / rn : 0.0;
    if (!x.allFinite() || (rn > 0.0 && res > kResidualTolerance * rn))
        throw NumericalFailure("linear solve residual too large", cond);
    return x;
}

std::vector<Eigen::Index> complement(Eigen::Index size, const std::vector<Eigen::Index>& fixed) {
    std::vector<bool> is_fixed(static_cast<std::size_t>(size), false);
    for (auto i : fixed) is_fixed[static_cast<std::size_t>(i)] = true;
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < size; ++i)
        if (!is_fixed[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

/// Solves the rows/columns of the free dofs with the fixed dofs set from `u`.
Vector constrained_solve(const FemSystem& sys, const Vector& load, const std::vector<Eigen::Index>& fixed,
                         Vector u) {
    const auto free = complement(sys.dofs(), fixed);
    if (free.empty()) return u;
    Vector ufixed = Vector::Zero(sys.dofs());
    for (auto i : fixed) ufixed[i] = u[i];
    const Vector rhs = gather(load - sys.matrix * ufixed, free);
    const Vector x = lu_solve(submatrix(sys.matrix, free, free), rhs);
    for (std::size_t i = 0; i < free.size(); ++i) u[free[i]] = x[static_cast<Eigen::Index>(i)];
    return u;
}

void require_load(const FemSystem& sys, const Vector& load) {
    if (load.size() != sys.dofs()) throw GridMismatch("load vector does not match the system");
}

}  // namespace

Vector AggregateRHS::total() const {
    if (boundary.size() == 0) return volume;
    if (volume.size() == 0) return boundary;
    if (volume.size() != boundary.size()) throw GridMismatch("aggregate parts differ in size");
    return volume + boundary;
}

Vector solve_dirichlet(const FemSystem& sys, const Vector& load, const VectorFunction& boundary_data) {
    require_load(sys, load);
    const int m = sys.components();
    const auto fixed = node_dofs(sys.mesh.boundary_nodes(), m);
    Vector u = Vector::Zero(sys.dofs());
    for (int node : sys.mesh.boundary_nodes())
        u.segment(static_cast<Eigen::Index>(node) * m, m) = boundary_data(sys.mesh.vertices()[node]);
    return constrained_solve(sys, load, fixed, std::move(u));
}

Vector solve_neumann(const FemSystem& sys, const Vector& load) {
    require_load(sys, load);
    const int m = sys.components();
    const Eigen::Index n = sys.dofs();
    const double scale = abs_row_norm(sys.matrix);

    // Components whose constants the matrix annihilates get a mean-zero constraint.
    std::vector<int> singular;
    for (int k = 0; k < m; ++k) {
        Vector ones = Vector::Zero(n);
        for (Eigen::Index i = k; i < n; i += m) ones[i] = 1.0;
        if ((sys.matrix * ones).cwiseAbs().maxCoeff() <= 1e-12 * scale) singular.push_back(k);
    }
    if (singular.empty()) return lu_solve(sys.matrix, load);

    const Vector weights = load_vector(sys.mesh, m, [m](const Point&) { return Vector::Ones(m); });
    const auto r = static_cast<Eigen::Index>(singular.size());
    std::vector<Eigen::Triplet<Complex>> t;
    for (Eigen::Index k = 0; k < sys.matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.matrix, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index c = 0; c < r; ++c)
        for (Eigen::Index i = singular[c]; i < n; i += m) {
            t.emplace_back(n + c, i, weights[i]);
            t.emplace_back(i, n + c, weights[i]);
        }
    SparseMatrix bordered(n + r, n + r);
    bordered.setFromTriplets(t.begin(), t.end());
    bordered.makeCompressed();
    Vector rhs = Vector::Zero(n + r);
    rhs.head(n) = load;
    const Vector x = lu_solve(bordered, rhs);

    // A u + C^T lambda = F: a nonzero multiplier measures the part of F that
    // no discrete u can produce.
    Vector correction = Vector::Zero(n);
    for (Eigen::Index c = 0; c < r; ++c)
        for (Eigen::Index i = singular[c]; i < n; i += m) correction[i] += weights[i] * x[n + c];
    const double fn = load.norm();
    const double defect = fn > 0.0 ? correction.norm() / fn : correction.norm();
    if (defect > kCompatibilityTolerance)
        throw InconsistentData("Neumann data incompatible with the nullspace of the operator", defect);
    return x.head(n);
}

Vector solve_neumann(const FemSystem& sys, const AggregateRHS& rhs) { return solve_neumann(sys, rhs.total()); }

Vector solve_mixed(const FemSystem& sys, const Vector& load, const std::set<int>& dirichlet_tags,
                   const VectorFunction& boundary_data) {
    require_load(sys, load);
    const auto dnodes = sys.mesh.nodes_on(dirichlet_tags);
    if (dnodes.empty()) return solve_neumann(sys, load);
    const int m = sys.components();
    Vector u = Vector::Zero(sys.dofs());
    for (int node : dnodes) u.segment(static_cast<Eigen::Index>(node) * m, m) = boundary_data(sys.mesh.vertices()[node]);
    return constrained_solve(sys, load, node_dofs(dnodes, m), std::move(u));
}

Vector solve_mixed(const FemSystem& sys, const AggregateRHS& rhs, const std::set<int>& dirichlet_tags,
                   const VectorFunction& boundary_data) {
    return solve_mixed(sys, rhs.total(), dirichlet_tags, boundary_data);
}

Vector apply_aggregate(const FemSystem& sys, const Vector& u) {
    if (u.size() != sys.dofs()) throw GridMismatch("field does not match the system");
    return sys.matrix * u;
}

}  // namespace sobolab::fem
