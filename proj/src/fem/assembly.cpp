#include "sobolab/fem.hpp"

#include <map>

#include "quadrature.hpp"

namespace sobolab::fem {

namespace detail {

const CellRule& assembly_rule(int dimension) {
    static const CellRule interval = [] {
        const double r = 0.5 * std::sqrt(0.6);
        CellRule rule;
        for (double t : {0.5 - r, 0.5, 0.5 + r}) rule.points.push_back({1.0 - t, t, 0.0});
        rule.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        return rule;
    }();
    static const CellRule triangle = [] {
        CellRule rule;
        rule.points = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                       {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                       {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
        rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return rule;
    }();
    return dimension == 1 ? interval : triangle;
}

const CellRule& error_rule(int dimension) {
    static const CellRule interval = [] {
        CellRule rule;
        const double x1 = 1.0 / 3.0 * std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0));
        const double x2 = 1.0 / 3.0 * std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0));
        const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        const std::array<double, 5> x{-x2, -x1, 0.0, x1, x2};
        const std::array<double, 5> w{w2, w1, 128.0 / 225.0, w1, w2};
        for (int q = 0; q < 5; ++q) {
            const double t = 0.5 * (1.0 + x[q]);
            rule.points.push_back({1.0 - t, t, 0.0});
            rule.weights.push_back(0.5 * w[q]);
        }
        return rule;
    }();
    static const CellRule triangle = [] {
        CellRule rule;
        const double s15 = std::sqrt(15.0);
        const double a1 = (6.0 - s15) / 21.0;
        const double a2 = (6.0 + s15) / 21.0;
        const double w1 = (155.0 - s15) / 1200.0;
        const double w2 = (155.0 + s15) / 1200.0;
        rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        rule.weights.push_back(9.0 / 40.0);
        for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
            const double b = 1.0 - 2.0 * a;
            rule.points.push_back({b, a, a});
            rule.points.push_back({a, b, a});
            rule.points.push_back({a, a, b});
            for (int k = 0; k < 3; ++k) rule.weights.push_back(w);
        }
        return rule;
    }();
    return dimension == 1 ? interval : triangle;
}

}  // namespace detail

namespace {

Point map_point(const Mesh& mesh, std::size_t cell, const std::array<double, 3>& bary) {
    Point x{};
    const auto& c = mesh.cells()[cell];
    for (int a = 0; a < mesh.nodes_per_cell(); ++a) {
        x[0] += bary[a] * mesh.vertices()[c[a]][0];
        x[1] += bary[a] * mesh.vertices()[c[a]][1];
    }
    return x;
}

void check_shape(const Mesh& mesh, const CoefficientSet& coeffs) {
    if (coeffs.dimension != mesh.dimension())
        throw GridMismatch("coefficient dimension does not match the mesh");
    if (coeffs.components < 1) throw DomainError("coefficients need at least one component");
}

}  // namespace

FemSystem assemble(const CoefficientSet& coeffs, const Mesh& mesh) {
    check_shape(mesh, coeffs);
    const int n = mesh.dimension();
    const int m = coeffs.components;
    const int nv = mesh.nodes_per_cell();
    const auto& rule = detail::assembly_rule(n);
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(mesh.cell_count() * static_cast<std::size_t>(nv * nv * m * m));
    DenseMatrix local(nv * m, nv * m);
    for (std::size_t e = 0; e < mesh.cell_count(); ++e) {
        const auto grads = mesh.basis_gradients(e);
        const double meas = mesh.cell_measure(e);
        local.setZero();
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const Point x = map_point(mesh, e, rule.points[q]);
            const double w = rule.weights[q] * meas;
            const auto& phi = rule.points[q];
            std::array<std::array<DenseMatrix, 2>, 2> a;
            std::array<DenseMatrix, 2> b;
            std::array<DenseMatrix, 2> d;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) a[i][j] = coeffs.eval_a(i, j, x);
                b[i] = coeffs.eval_b(i, x);
                d[i] = coeffs.eval_d(i, x);
            }
            const DenseMatrix c = coeffs.eval_c(x);
            for (int p = 0; p < nv; ++p)
                for (int r = 0; r < nv; ++r) {
                    // test function phi_p, trial function phi_r
                    DenseMatrix block = phi[r] * phi[p] * c;
                    for (int i = 0; i < n; ++i) {
                        for (int j = 0; j < n; ++j) block += grads[r][j] * grads[p][i] * a[i][j];
                        block += grads[r][i] * phi[p] * b[i];
                        block += phi[r] * grads[p][i] * d[i];
                    }
                    local.block(p * m, r * m, m, m) += w * block;
                }
        }
        const auto& cell = mesh.cells()[e];
        for (int p = 0; p < nv; ++p)
            for (int r = 0; r < nv; ++r)
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l)
                        triplets.emplace_back(cell[p] * m + k, cell[r] * m + l, local(p * m + k, r * m + l));
    }
    const auto dofs = static_cast<Eigen::Index>(mesh.node_count()) * m;
    FemSystem sys{mesh, coeffs, SparseMatrix(dofs, dofs)};
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

FemSystem assemble_adjoint(const CoefficientSet& coeffs, const Mesh& mesh) {
    return assemble(coeffs.adjoint(), mesh);
}

Vector load_vector(const Mesh& mesh, int components, const VectorFunction& f) {
    const int nv = mesh.nodes_per_cell();
    const auto& rule = detail::assembly_rule(mesh.dimension());
    Vector out = Vector::Zero(static_cast<Eigen::Index>(mesh.node_count()) * components);
    for (std::size_t e = 0; e < mesh.cell_count(); ++e) {
        const double meas = mesh.cell_measure(e);
        const auto& cell = mesh.cells()[e];
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const Vector fx = f(map_point(mesh, e, rule.points[q]));
            if (fx.size() != components) throw DomainError("load: wrong number of components");
            const double w = rule.weights[q] * meas;
            for (int p = 0; p < nv; ++p)
                out.segment(cell[p] * components, components) += w * rule.points[q][p] * fx;
        }
    }
    return out;
}

Vector boundary_load(const Mesh& mesh, int components, const VectorFunction& psi, const std::set<int>& tags) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(mesh.node_count()) * components);
    const auto& rule = detail::assembly_rule(1);
    for (const auto& f : mesh.facets()) {
        if (!tags.empty() && !tags.count(f.tag)) continue;
        if (mesh.dimension() == 1) {
            out.segment(f.nodes[0] * components, components) += psi(mesh.vertices()[f.nodes[0]]);
            continue;
        }
        const Point& p = mesh.vertices()[f.nodes[0]];
        const Point& q = mesh.vertices()[f.nodes[1]];
        for (std::size_t k = 0; k < rule.weights.size(); ++k) {
            const double t = rule.points[k][1];
            const Vector v = psi(Point{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
            const double w = rule.weights[k] * f.measure;
            out.segment(f.nodes[0] * components, components) += w * (1.0 - t) * v;
            out.segment(f.nodes[1] * components, components) += w * t * v;
        }
    }
    return out;
}

SparseMatrix boundary_mass(const Mesh& mesh, int components, const std::vector<int>& nodes) {
    std::map<int, int> pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = static_cast<int>(i);
    const auto size = static_cast<Eigen::Index>(nodes.size()) * components;
    std::vector<Eigen::Triplet<Complex>> t;
    if (mesh.dimension() == 1) {
        for (Eigen::Index i = 0; i < size; ++i) t.emplace_back(i, i, 1.0);
    } else {
        for (const auto& f : mesh.facets()) {
            const auto a = pos.find(f.nodes[0]);
            const auto b = pos.find(f.nodes[1]);
            if (a == pos.end() || b == pos.end()) continue;
            const std::array<int, 2> ids{a->second, b->second};
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s)
                    for (int k = 0; k < components; ++k)
                        t.emplace_back(ids[r] * components + k, ids[s] * components + k,
                                       f.measure * (r == s ? 2.0 : 1.0) / 6.0);
        }
    }
    SparseMatrix mass(size, size);
    mass.setFromTriplets(t.begin(), t.end());
    return mass;
}

Vector interpolate(const Mesh& mesh, int components, const VectorFunction& g) {
    Vector out(static_cast<Eigen::Index>(mesh.node_count()) * components);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        const Vector v = g(mesh.vertices()[i]);
        if (v.size() != components) throw DomainError("interpolate: wrong number of components");
        out.segment(static_cast<Eigen::Index>(i) * components, components) = v;
    }
    return out;
}

std::vector<Eigen::Index> node_dofs(const std::vector<int>& nodes, int components) {
    std::vector<Eigen::Index> out;
    out.reserve(nodes.size() * static_cast<std::size_t>(components));
    for (int n : nodes)
        for (int k = 0; k < components; ++k) out.push_back(static_cast<Eigen::Index>(n) * components + k);
    return out;
}

}  // namespace sobolab::fem
