#include "sobolab/coeff.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace sobolab::coeff {

std::vector<Complex> sample_on_grid(const HolderFunction& g, const GridSpec& grid) {
    std::vector<Complex> out(grid.point_count());
    const auto field = SpectralField::zeros(grid);
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const auto x = field.point(p);
        out[p] = g.fn(std::span<const double>(x.data(), 3));
    }
    return out;
}

bool product_hypothesis_holds(double mu, double s) {
    const double gap = mu - std::abs(s);
    return std::floor(s) == s ? gap >= 0.0 : gap > 0.0;
}

std::vector<ProductBoundRow> product_bound_check(const HolderFunction& g1, std::span<const SpectralField> g2_levels,
                                                 double s, const HolderSampling& sampling) {
    const double mu = g1.exponent;
    const double box_sup = sampled_sup(g1, sampling);
    const double base_norm = holder_norm(g1, mu, sampling);
    std::vector<ProductBoundRow> rows;
    for (const auto& g2 : g2_levels) {
        const auto samples = sample_on_grid(g1, g2.grid());
        double grid_sup = 0.0;
        for (const auto& z : samples) grid_sup = std::max(grid_sup, std::abs(z));

        ProductBoundRow row;
        row.points = g2.grid().points[0];
        row.s = s;
        row.product_norm = spectral::sobolev_norm(spectral::multiply_pointwise(g2, samples), s);
        row.holder_norm = base_norm + std::max(0.0, grid_sup - box_sup);
        row.field_norm = spectral::sobolev_norm(g2, s);
        row.ratio = row.product_norm / (row.holder_norm * row.field_norm);
        row.hypothesis_holds = product_hypothesis_holds(mu, s);
        rows.push_back(row);
    }
    return rows;
}

SpectralField commutator(const HolderFunction& g, const SpectralField& w, double t) {
    if (!std::isfinite(t)) throw DomainError("commutator order must be finite");
    if (t == 0.0) return SpectralField::zeros(w.grid());
    if (w.grid().components != 1) throw DomainError("commutator expects a scalar field");
    const auto samples = sample_on_grid(g, w.grid());
    const auto left = spectral::bessel_potential(spectral::multiply_pointwise(w, samples), t);
    const auto right = spectral::multiply_pointwise(spectral::bessel_potential(w, t), samples);
    return spectral::axpy(-1.0, right, left);
}

CommutatorRow commutator_bound_check(const HolderFunction& g, const SpectralField& w, double t, double s) {
    CommutatorRow row;
    row.points = w.grid().points[0];
    row.t = t;
    row.s = s;
    row.commutator_norm = spectral::sobolev_norm(commutator(g, w, t), s - t + 1.0);
    row.field_norm = spectral::sobolev_norm(w, s);
    row.ratio = t == 0.0 ? 0.0 : row.commutator_norm / (std::abs(t) * row.field_norm);
    return row;
}

// ---------------------------------------------------------------------------

ConstantSystem ConstantSystem::laplacian(int dimension, int components) {
    ConstantSystem sys;
    sys.dimension = dimension;
    sys.components = components;
    const auto eye = Eigen::MatrixXcd::Identity(components, components);
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j)
            sys.a.push_back(i == j ? Eigen::MatrixXcd(eye) : Eigen::MatrixXcd::Zero(components, components));
    sys.theta = eye;
    return sys;
}

Eigen::MatrixXcd ConstantSystem::symbol(std::span<const double> xi) const {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(components, components);
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j) s += block(i, j) * (xi[i] * xi[j]);
    return s;
}

namespace {

void validate(const ConstantSystem& sys) {
    if (sys.dimension < 1 || sys.dimension > 3) throw DomainError("system dimension must be 1, 2 or 3");
    if (sys.a.size() != static_cast<std::size_t>(sys.dimension * sys.dimension))
        throw DomainError("system needs dimension^2 coefficient blocks");
    for (const auto& b : sys.a)
        if (b.rows() != sys.components || b.cols() != sys.components)
            throw DomainError("coefficient block has the wrong shape");
    if (sys.theta.rows() != sys.components || sys.theta.cols() != sys.components)
        throw DomainError("ellipticity multiplier has the wrong shape");
}

std::vector<std::array<double, 3>> unit_directions(int n) {
    std::vector<std::array<double, 3>> dirs;
    if (n == 1) {
        dirs.push_back({1.0, 0.0, 0.0});
    } else if (n == 2) {
        constexpr int count = 2048;
        for (int k = 0; k < count; ++k) {
            const double th = std::numbers::pi * k / count;
            dirs.push_back({std::cos(th), std::sin(th), 0.0});
        }
    } else {
        constexpr int count = 4096;
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            const double z = 1.0 - 2.0 * (k + 0.5) / count;
            const double r = std::sqrt(1.0 - z * z);
            dirs.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
        }
    }
    return dirs;
}

}  // namespace

double ellipticity_margin(const ConstantSystem& sys) {
    validate(sys);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& xi : unit_directions(sys.dimension)) {
        const Eigen::MatrixXcd m = sys.theta * sys.symbol(xi);
        const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
        margin = std::min(margin, eig.eigenvalues().minCoeff());
    }
    return margin;
}

SpectralField solve_principal(const ConstantSystem& sys, const SpectralField& f) {
    validate(sys);
    const auto& grid = f.grid();
    if (grid.dimension != sys.dimension || grid.components != sys.components)
        throw GridMismatch("field does not match the system");
    const auto m = static_cast<std::size_t>(sys.components);
    const auto fh = f.fourier();
    std::vector<Complex> uh(fh.size(), Complex{});
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        if (f.frequency_norm_squared(p) == 0.0) continue;
        const auto xi = f.frequency(p);
        const Eigen::MatrixXcd a = four_pi2 * sys.symbol(xi);
        Eigen::VectorXcd rhs(sys.components);
        for (std::size_t k = 0; k < m; ++k) rhs[static_cast<Eigen::Index>(k)] = fh[p * m + k];
        const Eigen::VectorXcd u = a.partialPivLu().solve(rhs);
        for (std::size_t k = 0; k < m; ++k) uh[p * m + k] = u[static_cast<Eigen::Index>(k)];
    }
    return SpectralField::from_fourier(grid, std::move(uh));
}

AprioriReport apriori_check(const ConstantSystem& sys, const SpectralField& f, double s) {
    AprioriReport rep;
    rep.c0 = ellipticity_margin(sys);
    if (!(rep.c0 > 0.0)) throw DomainError("coefficients are not strongly elliptic");
    const double theta_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(sys.theta).singularValues()(0);
    rep.c1 = 4.0 * std::numbers::pi * std::numbers::pi * rep.c0 / (std::sqrt(2.0) * theta_norm);

    const auto u = solve_principal(sys, f);
    const double c1sq = rep.c1 * rep.c1;
    const double u_high = spectral::sobolev_norm(u, s + 2.0);
    const double u_low = spectral::sobolev_norm(u, s);
    const double f_norm = spectral::sobolev_norm(f, s);
    rep.lhs = c1sq * u_high * u_high;
    rep.rhs = 2.0 * f_norm * f_norm + 2.0 * c1sq * u_low * u_low;
    rep.slack = rep.rhs - rep.lhs;
    rep.holds = rep.slack >= 0.0;
    return rep;
}

}  // namespace sobolab::coeff
