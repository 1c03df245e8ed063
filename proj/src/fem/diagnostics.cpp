#include "sobolab/fem.hpp"

#include "quadrature.hpp"

namespace sobolab::fem {

namespace {

struct CellSample {
    Point x;
    double weight;
    std::array<double, 3> bary;
};

template <typename Fn>
void for_each_error_point(const Mesh& mesh, Fn&& fn) {
    const auto& rule = detail::error_rule(mesh.dimension());
    for (std::size_t e = 0; e < mesh.cell_count(); ++e) {
        const double meas = mesh.cell_measure(e);
        const auto& c = mesh.cells()[e];
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            Point x{};
            for (int a = 0; a < mesh.nodes_per_cell(); ++a) {
                x[0] += rule.points[q][a] * mesh.vertices()[c[a]][0];
                x[1] += rule.points[q][a] * mesh.vertices()[c[a]][1];
            }
            fn(e, CellSample{x, rule.weights[q] * meas, rule.points[q]});
        }
    }
}

Vector value_at(const Mesh& mesh, int m, const Vector& u, std::size_t e, const std::array<double, 3>& bary) {
    Vector v = Vector::Zero(m);
    const auto& c = mesh.cells()[e];
    for (int a = 0; a < mesh.nodes_per_cell(); ++a) v += bary[a] * u.segment(static_cast<Eigen::Index>(c[a]) * m, m);
    return v;
}

void require_field(const Mesh& mesh, int m, const Vector& u) {
    if (u.size() != static_cast<Eigen::Index>(mesh.node_count()) * m)
        throw GridMismatch("field does not match the mesh");
}

}  // namespace

double l2_norm(const Mesh& mesh, int m, const Vector& u) {
    require_field(mesh, m, u);
    CompensatedSum<double> acc;
    for_each_error_point(mesh, [&](std::size_t e, const CellSample& s) {
        acc.add(s.weight * value_at(mesh, m, u, e, s.bary).squaredNorm());
    });
    return std::sqrt(acc.value());
}

double l2_error(const Mesh& mesh, int m, const Vector& u, const VectorFunction& exact) {
    require_field(mesh, m, u);
    CompensatedSum<double> acc;
    for_each_error_point(mesh, [&](std::size_t e, const CellSample& s) {
        acc.add(s.weight * (value_at(mesh, m, u, e, s.bary) - exact(s.x)).squaredNorm());
    });
    return std::sqrt(acc.value());
}

double h1_seminorm_error(const Mesh& mesh, int m, const Vector& u, const GradientFunction& exact_gradient) {
    require_field(mesh, m, u);
    const int n = mesh.dimension();
    CompensatedSum<double> acc;
    std::size_t current = mesh.cell_count();
    DenseMatrix grad(m, n);
    for_each_error_point(mesh, [&](std::size_t e, const CellSample& s) {
        if (e != current) {
            current = e;
            const auto g = mesh.basis_gradients(e);
            const auto& c = mesh.cells()[e];
            grad.setZero();
            for (int a = 0; a < mesh.nodes_per_cell(); ++a)
                for (int j = 0; j < n; ++j) grad.col(j) += g[a][j] * u.segment(static_cast<Eigen::Index>(c[a]) * m, m);
        }
        const DenseMatrix ex = exact_gradient(s.x);
        acc.add(s.weight * (grad - ex.leftCols(n)).squaredNorm());
    });
    return std::sqrt(acc.value());
}

double galerkin_residual(const FemSystem& sys, const Vector& u, const Vector& load, const std::vector<int>& test_nodes) {
    const Vector r = sys.matrix * u - load;
    const Vector au = sys.matrix * u;
    const int m = sys.components();
    double worst = 0.0;
    double scale = 0.0;
    for (int node : test_nodes)
        for (int k = 0; k < m; ++k) {
            const auto i = static_cast<Eigen::Index>(node) * m + k;
            worst = std::max(worst, std::abs(r[i]));
            scale = std::max({scale, std::abs(load[i]), std::abs(au[i])});
        }
    return scale > 0.0 ? worst / scale : worst;
}

double aggregate_second_green_residual(const FemSystem& sys, const FemSystem& adjoint, const Vector& u,
                                       const Vector& v) {
    const Vector au = sys.matrix * u;
    const Vector av = adjoint.matrix * v;
    // <L u, conj v> = v^H (A u) and <u, conj(L* v)> = (A* v)^H u.
    const Complex lhs = v.dot(au);
    const Complex rhs = av.dot(u);
    const double scale = au.norm() * v.norm() + av.norm() * u.norm();
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
}

std::vector<double> observed_rates(const std::vector<double>& errors) {
    std::vector<double> rates;
    for (std::size_t i = 1; i < errors.size(); ++i) rates.push_back(std::log2(errors[i - 1] / errors[i]));
    return rates;
}

}  // namespace sobolab::fem
