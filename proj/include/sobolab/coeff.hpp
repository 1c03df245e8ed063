#pragma once

// Hölder-Lipschitz coefficient machinery on periodic grids and boxes:
// sampled seminorms, exponent estimates, coefficient classes, product and
// commutator bounds, the constant-coefficient a-priori estimate and a
// spectral-decay regularity probe.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sobolab/fem.hpp"
#include "sobolab/spectral.hpp"

namespace sobolab::coeff {

using spectral::GridSpec;
using spectral::SpectralField;

/// A scalar function on a closed box with a declared Hölder exponent.
struct HolderFunction {
    std::function<Complex(std::span<const double>)> fn;
    double exponent = 0.0;
    int dimension = 1;
    std::array<double, 3> lower{0.0, 0.0, 0.0};
    std::array<double, 3> upper{1.0, 1.0, 1.0};

    Complex operator()(std::span<const double> x) const { return fn(x); }
    double diameter() const;
    /// Box of a periodic grid, [-L/2, L/2] per axis.
    static HolderFunction on_grid(const GridSpec& grid, double exponent,
                                  std::function<Complex(std::span<const double>)> fn);
};

struct HolderSampling {
    std::uint64_t seed = 7;
    int random_pairs = 2000;
    int random_anchors = 32;
    /// Dyadic offsets diam * 2^-k for k = 1..levels around each anchor.
    int levels = 20;
};

/// Anchors used by every sampled quantity: the box centre, corners, a
/// uniform lattice and seeded random points.
std::vector<std::array<double, 3>> sample_anchors(const HolderFunction& g, const HolderSampling& sampling);

/// Sample maximum of |d^a g(x) - d^a g(y)| / |x - y|^{mu - d}, d = ceil(mu) - 1
/// (so mu = 1 gives the Lipschitz quotient). A lower bound on the true
/// seminorm. DomainError for mu < 0 or mu >= 2.
double holder_seminorm(const HolderFunction& g, double mu, const HolderSampling& sampling = {});

/// Sample maximum of |g| over the anchors.
double sampled_sup(const HolderFunction& g, const HolderSampling& sampling = {});

/// Sampled sup |g| (plus sup |grad g| when mu > 1) plus the seminorm.
double holder_norm(const HolderFunction& g, double mu, const HolderSampling& sampling = {});

struct ExponentEstimate {
    /// Slope of log max|g(x+h) - 2g(x) + g(x-h)| against log h. Saturates at 2.
    double exponent = 0.0;
    /// True when the fit sits at the second-difference ceiling (exponent >= 1.95).
    bool saturated = false;
    /// True for functions whose second differences vanish to roundoff.
    bool negligible = false;
    double fit_residual = 0.0;
};

ExponentEstimate estimate_exponent(const HolderFunction& g, const HolderSampling& sampling = {});

/// Declared exponent within a factor of two of the estimate (a saturated
/// estimate only bounds it from below).
bool declared_exponent_consistent(const HolderFunction& g, const HolderSampling& sampling = {});

// ---------------------------------------------------------------------------
// Coefficient classes

double required_exponent_a(double sigma);
double required_exponent_b(double sigma);
double required_exponent_c(double sigma);

/// Measured exponent meets a required one: strictly larger, or equal (to
/// 1e-2) when the requirement is an integer.
bool exponent_meets(double measured, double required);

struct CoefficientClassReport {
    double sigma = 0.0;
    std::array<double, 3> required{};
    /// +infinity for a coefficient that is identically zero.
    std::array<double, 3> measured{};
    std::array<bool, 3> saturated{};
    bool pass = false;
};

/// Minimum estimated exponent over the real and imaginary parts of every
/// matrix entry of a, b (and d), c on the box.
CoefficientClassReport coefficient_class_check(const fem::CoefficientSet& coeffs, double sigma,
                                               const std::array<double, 2>& lower,
                                               const std::array<double, 2>& upper,
                                               const HolderSampling& sampling = {});

// ---------------------------------------------------------------------------
// Product and commutator estimates

/// Samples of g at the points of a grid.
std::vector<Complex> sample_on_grid(const HolderFunction& g, const GridSpec& grid);

/// mu - |s| is >= 0 for integer s and > 0 otherwise.
bool product_hypothesis_holds(double mu, double s);

struct ProductBoundRow {
    std::size_t points = 0;
    double s = 0.0;
    double product_norm = 0.0;
    double holder_norm = 0.0;
    double field_norm = 0.0;
    /// product_norm / (holder_norm * field_norm)
    double ratio = 0.0;
    bool hypothesis_holds = true;
};

/// One row per field (typically the same g2 on refined grids). The Hölder
/// norm uses g1.exponent; its sup part also covers the grid samples.
std::vector<ProductBoundRow> product_bound_check(const HolderFunction& g1, std::span<const SpectralField> g2_levels,
                                                 double s, const HolderSampling& sampling = {});

/// J^t(g w) - g J^t w; exactly zero for t = 0.
SpectralField commutator(const HolderFunction& g, const SpectralField& w, double t);

struct CommutatorRow {
    std::size_t points = 0;
    double t = 0.0;
    double s = 0.0;
    /// ||commutator||_{H^{s-t+1}}
    double commutator_norm = 0.0;
    double field_norm = 0.0;
    /// commutator_norm / (|t| field_norm); zero at t = 0.
    double ratio = 0.0;
};

CommutatorRow commutator_bound_check(const HolderFunction& g, const SpectralField& w, double t, double s);

// ---------------------------------------------------------------------------
// Constant-coefficient a-priori estimate

/// Principal part -sum d_i a_ij d_j with constant m x m blocks a_ij.
struct ConstantSystem {
    int dimension = 1;
    int components = 1;
    /// a[i * dimension + j]
    std::vector<Eigen::MatrixXcd> a;
    Eigen::MatrixXcd theta;

    static ConstantSystem laplacian(int dimension, int components = 1);
    const Eigen::MatrixXcd& block(int i, int j) const { return a[static_cast<std::size_t>(i * dimension + j)]; }
    /// sum a_ij xi_i xi_j
    Eigen::MatrixXcd symbol(std::span<const double> xi) const;
};

/// min over unit xi (exact in 1D, 2048 angles in 2D, a 4096-point
/// Fibonacci sphere in 3D) and unit zeta of Re zeta^H theta A(xi) zeta.
double ellipticity_margin(const ConstantSystem& sys);

struct AprioriReport {
    double c0 = 0.0;
    double c1 = 0.0;
    /// C1^2 ||U||^2_{H^{s+2}}
    double lhs = 0.0;
    /// 2 ||f||^2_{H^s} + 2 C1^2 ||U||^2_{H^s}
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = false;
};

/// C1 = 4 pi^2 C0 / (sqrt(2) |theta|), the largest constant for which the
/// frequency-wise bound follows from the ellipticity margin. U solves
/// 4 pi^2 A(xi) U^ = f^ for xi != 0, U^(0) = 0. DomainError for a
/// non-positive margin.
AprioriReport apriori_check(const ConstantSystem& sys, const SpectralField& f, double s);

/// Spectral solve used by apriori_check.
SpectralField solve_principal(const ConstantSystem& sys, const SpectralField& f);

// ---------------------------------------------------------------------------
// Regularity probe

/// -(a u')' + u = f on the periodic interval [-L/2, L/2].
struct RegularityProblem {
    std::function<double(double)> a;
    std::function<double(double)> f;
    /// Hölder exponent of a (infinity for smooth a).
    double coefficient_exponent = 0.0;
    /// Known Sobolev index of f (infinity for smooth f).
    double data_index = 0.0;
    double extent = 2.0;
    std::size_t points = 8192;
};

struct RegularityReport {
    double estimated_index = 0.0;
    /// min(s_f, mu - 1) + 2
    double predicted_index = 0.0;
    double fit_residual = 0.0;
    bool smooth = false;
    bool inconclusive = false;
    int shells_used = 0;
    int solver_iterations = 0;
    double solver_residual = 0.0;
    std::size_t points = 0;
    double extent = 0.0;
};

/// Dyadic-shell energies of a field's Fourier coefficients, E_k over
/// 2^k <= |j| < 2^{k+1} (index units), k = 0..log2(N/2) - 1.
std::vector<double> shell_energies(const SpectralField& u);

/// Least-squares index from shell energies: E_k ~ 2^{-2 s k}.
struct DecayFit {
    double index = 0.0;
    double residual = 0.0;
    int shells = 0;
    bool hit_floor = false;
};

DecayFit fit_decay(std::span<const double> energies, int first_shell, int last_shell);

/// Solves by preconditioned conjugate gradients on the grid, localizes with
/// the Gaussian cutoff of width L/16 (below 2e-8 beyond 3L/8) and fits the
/// shell energies over |j| in [32, N/16). "smooth" when the energy falls
/// to roundoff inside the window or the fitted index exceeds 8.
RegularityReport regularity_probe(const RegularityProblem& problem);

}  // namespace sobolab::coeff
