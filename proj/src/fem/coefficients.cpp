#include "sobolab/fem.hpp"

#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace sobolab::fem {

namespace {

DenseMatrix eval_or_zero(const MatrixFunction& f, const Point& x, int m) {
    if (!f) return DenseMatrix::Zero(m, m);
    DenseMatrix r = f(x);
    if (r.rows() != m || r.cols() != m) throw DomainError("coefficient has the wrong shape");
    return r;
}

MatrixFunction conjugate_transpose(const MatrixFunction& f) {
    if (!f) return {};
    return [f](const Point& x) -> DenseMatrix { return f(x).adjoint(); };
}

}  // namespace

CoefficientSet CoefficientSet::laplacian(int dimension, int components, double reaction) {
    CoefficientSet cs;
    cs.dimension = dimension;
    cs.components = components;
    const DenseMatrix eye = DenseMatrix::Identity(components, components);
    for (int i = 0; i < dimension; ++i) cs.a[i][i] = [eye](const Point&) { return eye; };
    if (reaction != 0.0) cs.c = [eye, reaction](const Point&) -> DenseMatrix { return reaction * eye; };
    return cs;
}

CoefficientSet CoefficientSet::scalar_diffusion(int dimension, std::function<double(const Point&)> alpha,
                                                double reaction) {
    CoefficientSet cs;
    cs.dimension = dimension;
    for (int i = 0; i < dimension; ++i)
        cs.a[i][i] = [alpha](const Point& x) { return DenseMatrix::Constant(1, 1, alpha(x)); };
    if (reaction != 0.0) cs.c = [reaction](const Point&) { return DenseMatrix::Constant(1, 1, reaction); };
    return cs;
}

DenseMatrix CoefficientSet::eval_a(int i, int j, const Point& x) const { return eval_or_zero(a[i][j], x, components); }
DenseMatrix CoefficientSet::eval_b(int j, const Point& x) const { return eval_or_zero(b[j], x, components); }
DenseMatrix CoefficientSet::eval_d(int j, const Point& x) const { return eval_or_zero(d[j], x, components); }
DenseMatrix CoefficientSet::eval_c(const Point& x) const { return eval_or_zero(c, x, components); }

DenseMatrix CoefficientSet::eval_theta(const Point& x) const {
    if (!theta) return DenseMatrix::Identity(components, components);
    return eval_or_zero(theta, x, components);
}

CoefficientSet CoefficientSet::adjoint() const {
    CoefficientSet r;
    r.dimension = dimension;
    r.components = components;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.a[i][j] = conjugate_transpose(a[j][i]);
    for (int j = 0; j < 2; ++j) {
        r.b[j] = conjugate_transpose(d[j]);
        r.d[j] = conjugate_transpose(b[j]);
    }
    r.c = conjugate_transpose(c);
    r.theta = conjugate_transpose(theta);
    return r;
}

EllipticityReport check_strong_ellipticity(const CoefficientSet& coeffs, const std::vector<Point>& points,
                                           int directions) {
    if (points.empty()) throw DomainError("ellipticity check: no sample points");
    EllipticityReport report;
    report.margin = std::numeric_limits<double>::infinity();
    const int n = coeffs.dimension;
    // Directions xi and -xi give the same symbol, so half a circle suffices.
    const int count = n == 1 ? 1 : std::max(directions, 1);
    for (const auto& x : points) {
        const DenseMatrix th = coeffs.eval_theta(x);
        std::array<std::array<DenseMatrix, 2>, 2> a;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = coeffs.eval_a(i, j, x);
        for (int k = 0; k < count; ++k) {
            const double phi = std::numbers::pi * k / count;
            const std::array<double, 2> xi{n == 1 ? 1.0 : std::cos(phi), n == 1 ? 0.0 : std::sin(phi)};
            DenseMatrix sym = DenseMatrix::Zero(coeffs.components, coeffs.components);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) sym += xi[i] * xi[j] * a[i][j];
            const DenseMatrix m = th * sym;
            const DenseMatrix herm = 0.5 * (m + m.adjoint());
            Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(herm, Eigen::EigenvaluesOnly);
            const double lam = eig.eigenvalues().minCoeff();
            if (lam < report.margin) {
                report.margin = lam;
                report.worst_point = x;
            }
        }
    }
    report.elliptic = report.margin > 0.0;
    return report;
}

std::vector<Point> sample_points(const Mesh& mesh) {
    std::vector<Point> pts = mesh.vertices();
    for (const auto& c : mesh.cells()) {
        Point g{};
        for (int a = 0; a < mesh.nodes_per_cell(); ++a) {
            g[0] += mesh.vertices()[c[a]][0] / mesh.nodes_per_cell();
            g[1] += mesh.vertices()[c[a]][1] / mesh.nodes_per_cell();
        }
        pts.push_back(g);
    }
    return pts;
}

}  // namespace sobolab::fem
