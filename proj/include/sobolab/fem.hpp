#pragma once

// P1 finite elements for m-component second-order systems on intervals and
// polygons. Degrees of freedom are node-major with the component innermost:
// dof(node, k) = node * m + k. The assembled matrix A satisfies
// E(u, v) = v^T A u, i.e. A[(p,k),(q,l)] = E(phi_q e_l, phi_p e_k), with
//
//   E(u, v) = sum_ij <a_ij d_j u, d_i v> + sum_j <b_j d_j u, v>
//           + sum_j <d_j u, d_j v>_D + <c u, v>
//
// where <D_j u, d_j v> is a first-order term kept so that adjoint systems
// are expressible in the same form. All pairings are bilinear.

#include <array>
#include <functional>
#include <iosfwd>
#include <set>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sobolab/common.hpp"
#include "sobolab/spectral.hpp"

namespace sobolab::fem {

using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Point = std::array<double, 2>;
/// x -> m x m matrix.
using MatrixFunction = std::function<DenseMatrix(const Point&)>;
/// x -> m-vector.
using VectorFunction = std::function<Vector(const Point&)>;
/// x -> m x n matrix whose column j is d/dx_j.
using GradientFunction = std::function<DenseMatrix(const Point&)>;

// ---------------------------------------------------------------------------
// Mesh

struct BoundaryFacet {
    /// Edge endpoints in 2D; in 1D both entries hold the boundary vertex.
    std::array<int, 2> nodes{};
    int tag = 0;
    int cell = -1;
    Point normal{};
    double measure = 0.0;
};

class Mesh {
public:
    /// Uniform interval mesh; boundary tags 1 at a and 2 at b.
    static Mesh interval(double a, double b, int cells);
    /// Structured triangulation of a rectangle, each cell split along its
    /// lower-left to upper-right diagonal. Tags: 1 bottom, 2 right, 3 top, 4 left.
    static Mesh rectangle(double x0, double x1, double y0, double y1, int nx, int ny);
    static Mesh unit_square(int n) { return rectangle(0.0, 1.0, 0.0, 1.0, n, n); }
    /// Validates the parts and computes facet normals; throws DomainError on
    /// degenerate cells or an incompletely tagged boundary.
    static Mesh from_parts(int dimension, std::vector<Point> vertices,
                           std::vector<std::array<int, 3>> cells,
                           std::vector<BoundaryFacet> boundary);

    /// Text format: sections "dim d", "vertices N", "cells M", "boundary K".
    static Mesh read(std::istream& in);
    void write(std::ostream& out) const;

    int dimension() const { return dimension_; }
    int nodes_per_cell() const { return dimension_ + 1; }
    std::size_t node_count() const { return vertices_.size(); }
    std::size_t cell_count() const { return cells_.size(); }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& cells() const { return cells_; }
    const std::vector<BoundaryFacet>& facets() const { return facets_; }
    /// Sorted boundary vertex indices.
    const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }
    /// Sorted vertices lying on a facet whose tag is in `tags` (closure).
    std::vector<int> nodes_on(const std::set<int>& tags) const;
    std::set<int> tags() const;
    std::vector<bool> boundary_mask() const;
    /// Largest cell diameter.
    double mesh_size() const;
    double cell_measure(std::size_t cell) const;
    /// Gradients of the cell's barycentric basis functions (one Point each).
    std::array<Point, 3> basis_gradients(std::size_t cell) const;
    /// Bounding box (lo, hi).
    std::pair<Point, Point> bounds() const;

private:
    int dimension_ = 1;
    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<BoundaryFacet> facets_;
    std::vector<int> boundary_nodes_;
};

// ---------------------------------------------------------------------------
// Coefficients

struct CoefficientSet {
    int dimension = 1;
    int components = 1;
    /// a[i][j]; an empty function means zero.
    std::array<std::array<MatrixFunction, 2>, 2> a{};
    std::array<MatrixFunction, 2> b{};
    /// First-order term paired with derivatives of the test function.
    std::array<MatrixFunction, 2> d{};
    MatrixFunction c{};
    /// Ellipticity multiplier; identity when empty.
    MatrixFunction theta{};

    /// a_ij = delta_ij I, c = reaction I.
    static CoefficientSet laplacian(int dimension, int components = 1, double reaction = 0.0);
    /// a_ij = delta_ij alpha(x) I.
    static CoefficientSet scalar_diffusion(int dimension, std::function<double(const Point&)> alpha,
                                           double reaction = 0.0);

    DenseMatrix eval_a(int i, int j, const Point& x) const;
    DenseMatrix eval_b(int j, const Point& x) const;
    DenseMatrix eval_d(int j, const Point& x) const;
    DenseMatrix eval_c(const Point& x) const;
    DenseMatrix eval_theta(const Point& x) const;

    /// Coefficients of the formal adjoint: a'_ij = conj(a_ji)^T,
    /// b'_j = conj(d_j)^T, d'_j = conj(b_j)^T, c' = conj(c)^T; the assembled
    /// adjoint matrix is the conjugate transpose of the original.
    CoefficientSet adjoint() const;
};

struct EllipticityReport {
    double margin = 0.0;
    bool elliptic = false;
    Point worst_point{};
};

/// min over x in `points`, unit xi (sampled) and unit zeta (exact, via the
/// smallest eigenvalue of the Hermitian part) of
/// Re{ conj(zeta)^T theta(x) sum a_ij(x) xi_i xi_j zeta }.
EllipticityReport check_strong_ellipticity(const CoefficientSet& coeffs,
                                           const std::vector<Point>& points,
                                           int directions = 64);
/// Vertices and cell centroids of a mesh.
std::vector<Point> sample_points(const Mesh& mesh);

// ---------------------------------------------------------------------------
// Assembly

struct FemSystem {
    Mesh mesh;
    CoefficientSet coefficients;
    SparseMatrix matrix;

    int components() const { return coefficients.components; }
    Eigen::Index dofs() const { return matrix.rows(); }
};

/// 3-point Gauss rule per interval cell, 3-point (2/3, 1/6, 1/6) rule per triangle.
FemSystem assemble(const CoefficientSet& coeffs, const Mesh& mesh);
/// assemble(coeffs.adjoint(), mesh).
FemSystem assemble_adjoint(const CoefficientSet& coeffs, const Mesh& mesh);

/// F_(i,k) = \int f_k phi_i over the domain.
Vector load_vector(const Mesh& mesh, int components, const VectorFunction& f);
/// G_(i,k) = \int_{facets with tag in tags} psi_k phi_i ds (all facets when tags is empty).
Vector boundary_load(const Mesh& mesh, int components, const VectorFunction& psi,
                     const std::set<int>& tags = {});
/// P1 boundary mass matrix over the given boundary nodes (in that order),
/// m components each. In 1D it is the identity (point evaluation).
SparseMatrix boundary_mass(const Mesh& mesh, int components, const std::vector<int>& nodes);
/// Nodal interpolant.
Vector interpolate(const Mesh& mesh, int components, const VectorFunction& g);
/// Dof indices of the given nodes, node-major.
std::vector<Eigen::Index> node_dofs(const std::vector<int>& nodes, int components);

// ---------------------------------------------------------------------------
// Boundary value problems

/// Aggregate right-hand side: a volume functional and a boundary functional,
/// both tested against every nodal basis function.
struct AggregateRHS {
    Vector volume;
    Vector boundary;

    Vector total() const;
};

/// Dirichlet problem: E(u, z) = <f, z> for interior z, u = g on the boundary.
Vector solve_dirichlet(const FemSystem& system, const Vector& load, const VectorFunction& boundary_data);
/// Neumann problem: E(u, v) = <f_agg, v> for all v. When the matrix
/// annihilates constants the mean of each such component is fixed to zero
/// and incompatible data raises InconsistentData with the relative defect.
Vector solve_neumann(const FemSystem& system, const Vector& aggregate_load);
Vector solve_neumann(const FemSystem& system, const AggregateRHS& rhs);
/// Mixed problem: Dirichlet data on facets tagged in dirichlet_tags, the
/// aggregate functional tested on interior and Neumann-part nodes. Falls
/// back to solve_neumann when no facet carries a Dirichlet tag.
Vector solve_mixed(const FemSystem& system, const Vector& aggregate_load,
                   const std::set<int>& dirichlet_tags, const VectorFunction& boundary_data);
Vector solve_mixed(const FemSystem& system, const AggregateRHS& rhs,
                   const std::set<int>& dirichlet_tags, const VectorFunction& boundary_data);

/// The discrete aggregate operator: (E(u, phi_i e_k))_(i,k) over all nodes.
Vector apply_aggregate(const FemSystem& system, const Vector& u);

// ---------------------------------------------------------------------------
// Diagnostics

double l2_norm(const Mesh& mesh, int components, const Vector& u);
double l2_error(const Mesh& mesh, int components, const Vector& u, const VectorFunction& exact);
double h1_seminorm_error(const Mesh& mesh, int components, const Vector& u,
                         const GradientFunction& exact_gradient);

/// max over interior test functions of |E(u, z) - <f, z>|, relative to |f|.
double galerkin_residual(const FemSystem& system, const Vector& u, const Vector& load,
                         const std::vector<int>& test_nodes);
/// Relative residual of v^H (A u) = (A* v)^H u with A* from the adjoint system.
double aggregate_second_green_residual(const FemSystem& system, const FemSystem& adjoint,
                                       const Vector& u, const Vector& v);

/// log2 ratios of consecutive errors for meshes halving h; the minimum is
/// the observed rate.
std::vector<double> observed_rates(const std::vector<double>& errors);

// ---------------------------------------------------------------------------
// Embedding into the periodic grid

/// Periodic box containing the mesh with a margin, sample spacing mesh_size / refine.
spectral::GridSpec ambient_grid(const Mesh& mesh, int refine = 8);
/// Samples the P1 field (one component) on the grid, zero outside the mesh.
spectral::SpectralField embed(const Mesh& mesh, int components, const Vector& u, int component,
                              const spectral::GridSpec& grid);

struct DistanceWeightReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// lhs = \int dist(x, boundary)^{-2s} |u|^2 (distance exact on intervals and
/// rectangles), rhs = squared H^s norm of the zero extension on the ambient grid.
DistanceWeightReport distance_weight_check(const Mesh& mesh, const Vector& u, double s, int refine = 8);

struct ZeroExtensionRow {
    double s = 0.0;
    double norm = 0.0;
};

/// H^s norms of the zero extension of a field with zero boundary trace.
std::vector<ZeroExtensionRow> zero_extension_probe(const Mesh& mesh, const Vector& u,
                                                   std::span<const double> s_list, int refine = 8);

}  // namespace sobolab::fem
