#pragma once

// Co-normal derivatives recovered variationally from the first Green identity
//
//   E(u, v) - <f_ext, v> = <T, gamma v>   for every discrete v,
//
// with T stored against the P1 boundary mass matrix: T holds boundary nodal
// coefficients and <T, w> = w^T M_b T.

#include <iosfwd>
#include <memory>
#include <string>

#include <Eigen/SparseCholesky>

#include "sobolab/fem.hpp"

namespace sobolab::conormal {

using fem::DenseMatrix;
using fem::FemSystem;
using fem::Mesh;
using fem::Point;
using fem::SparseMatrix;
using fem::Vector;
using fem::VectorFunction;

/// Boundary nodes of a mesh with a factorized boundary mass matrix.
class BoundarySpace {
public:
    BoundarySpace(const Mesh& mesh, int components);

    const std::vector<int>& nodes() const { return nodes_; }
    int components() const { return components_; }
    Eigen::Index size() const { return mass_.rows(); }
    const SparseMatrix& mass() const { return mass_; }
    /// M_b^{-1} r.
    Vector solve_mass(const Vector& r) const;
    /// Boundary entries of a full nodal vector.
    Vector restrict(const Vector& full) const;
    /// Full nodal vector with the given boundary entries and zero interior.
    Vector prolong(const Vector& boundary) const;
    /// sqrt(T^H M_b T).
    double norm(const Vector& t) const;

private:
    std::vector<int> nodes_;
    int components_;
    std::vector<Eigen::Index> dofs_;
    Eigen::Index total_dofs_;
    SparseMatrix mass_;
    std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> factor_;
};

struct ConormalTrace {
    /// Boundary nodal coefficients, node-major over BoundarySpace::nodes().
    Vector coefficients;
    /// Sobolev order of the space the trace lives in (s - 3/2 with s = 1).
    double sobolev_order = -0.5;
};

enum class ExtensionKind { aggregate, canonical, classical, nominated, custom };

std::string to_string(ExtensionKind kind);

/// A rule extending Lu up to the boundary, resolved to a functional on all
/// nodal basis functions.
struct ExtensionChoice {
    ExtensionKind kind = ExtensionKind::aggregate;
    Vector functional;
};

enum class Lifting {
    /// Boundary nodal values, zero interior values.
    zero_interior,
    /// Interior values solving the interior rows of the system.
    discrete_harmonic,
};

/// Facetwise sum a_ij d_j u nu_i + d_j u nu_j, projected on boundary P1 functions.
ConormalTrace classical_conormal(const FemSystem& system, const Vector& u);
/// The classical co-normal derivative of the adjoint system:
/// sum conj(a_ji)^T d_j v nu_i + sum conj(b_i)^T v nu_i.
ConormalTrace modified_conormal(const FemSystem& system, const Vector& v);

/// f_ext = A u: the aggregate operator.
ExtensionChoice aggregate_extension(const FemSystem& system, const Vector& u);
/// f_ext = A u - gamma* T_c u with T_c the classical co-normal derivative.
ExtensionChoice classical_extension(const FemSystem& system, const Vector& u);
/// f_ext tested against all nodes as \int f phi_i, for interior data f in H^t,
/// |t| < 1/2, where the extension is unique.
ExtensionChoice canonical_extension(const FemSystem& system, const VectorFunction& f, double t = 0.0);
/// f_ext = A u - gamma* t: any boundary functional may serve as co-normal derivative.
ExtensionChoice nominate_conormal(const FemSystem& system, const Vector& u, const ConormalTrace& t);
ExtensionChoice custom_extension(const Vector& functional);

/// Solves M_b T = r with r_i = E(u, E w_i) - <f_ext, E w_i>. Raises
/// InconsistentData when f_ext departs from A u on interior test functions
/// by more than 1e-8 relative.
ConormalTrace generalized_conormal(const FemSystem& system, const Vector& u, const ExtensionChoice& choice,
                                   Lifting lifting = Lifting::zero_interior);
/// generalized_conormal with the canonical extension of f.
ConormalTrace canonical_conormal(const FemSystem& system, const Vector& u, const VectorFunction& f);

/// max over all nodal test functions of |E(u, v) - <f_ext, v> - <T, gamma v>|, relative.
double first_green_residual(const FemSystem& system, const Vector& u, const ExtensionChoice& choice,
                            const ConormalTrace& trace);

struct ConormalDifference {
    /// T(f1, u) - T(f2, u).
    ConormalTrace direct;
    /// Boundary density g with f2 - f1 = gamma* g.
    ConormalTrace recovered;
    /// Relative distance between the two.
    double mismatch = 0.0;
};

ConormalDifference conormal_difference(const FemSystem& system, const Vector& u, const ExtensionChoice& first,
                                       const ExtensionChoice& second);

struct SecondGreenInputs {
    Vector u;
    ExtensionChoice choice;
    Vector v;
    ExtensionChoice adjoint_choice;
};

/// Residual of <f_ext, conj v> - <u, conj f*_ext> = <u, conj T*> - <T, conj v>
/// on the boundary, with T and T* recovered variationally.
double second_green_residual(const FemSystem& system, const FemSystem& adjoint, const SecondGreenInputs& in);

/// Boundary L2 distance between the P1 trace and an exact flux g(x, nu).
double boundary_l2_error(const Mesh& mesh, int components, const ConormalTrace& trace,
                         const std::function<Vector(const Point&, const Point&)>& exact_flux);

/// CSV rows: node, x, y, component, re, im of the coefficient and of the
/// mass-lumped pointwise value.
void write_trace_csv(std::ostream& out, const Mesh& mesh, int components, const ConormalTrace& trace);

}  // namespace sobolab::conormal
