#include "sobolab/coeff.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sobolab::coeff {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double real_dot(std::span<const Complex> x, std::span<const Complex> y) {
    CompensatedSum<double> acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
    return acc.value();
}

// Spectral derivative with the Nyquist mode dropped, so the discrete
// operator stays symmetric on real fields.
SpectralField derivative(const SpectralField& u) {
    const auto& grid = u.grid();
    const auto uh = u.fourier();
    std::vector<Complex> out(uh.size());
    for (std::size_t k = 0; k < grid.points[0]; ++k) {
        if (grid.signed_index(0, k) == -static_cast<long>(grid.points[0] / 2)) continue;
        out[k] = Complex(0.0, two_pi * grid.frequency(0, k)) * uh[k];
    }
    return SpectralField::from_fourier(grid, std::move(out));
}

class DivergenceOperator {
public:
    DivergenceOperator(const GridSpec& grid, std::vector<Complex> a) : grid_(grid), a_(std::move(a)) {
        CompensatedSum<double> acc;
        for (const auto& z : a_) acc.add(z.real());
        mean_ = acc.value() / static_cast<double>(a_.size());
    }

    // -(a u')' + u
    std::vector<Complex> apply(std::span<const Complex> u) const {
        const auto f = SpectralField::from_values(grid_, {u.begin(), u.end()});
        const auto flux = spectral::multiply_pointwise(derivative(f), a_);
        const auto div = derivative(flux);
        std::vector<Complex> out(u.size());
        const auto dv = div.values();
        for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - dv[i];
        return out;
    }

    // (mean(a) (2 pi xi)^2 + 1)^{-1}
    std::vector<Complex> precondition(std::span<const Complex> r) const {
        const auto f = SpectralField::from_values(grid_, {r.begin(), r.end()});
        const auto fh = f.fourier();
        std::vector<Complex> out(fh.size());
        for (std::size_t k = 0; k < grid_.points[0]; ++k) {
            const double w = two_pi * grid_.frequency(0, k);
            out[k] = fh[k] / (mean_ * w * w + 1.0);
        }
        const auto g = SpectralField::from_fourier(grid_, std::move(out));
        const auto v = g.values();
        return {v.begin(), v.end()};
    }

private:
    GridSpec grid_;
    std::vector<Complex> a_;
    double mean_ = 1.0;
};

}  // namespace

std::vector<double> shell_energies(const SpectralField& u) {
    const auto& grid = u.grid();
    const auto n = grid.points[0];
    int shells = 0;
    while ((std::size_t{2} << shells) <= n / 2) ++shells;
    std::vector<CompensatedSum<double>> acc(static_cast<std::size_t>(shells));
    const auto uh = u.fourier();
    const auto m = static_cast<std::size_t>(grid.components);
    for (std::size_t k = 0; k < n; ++k) {
        const long j = std::abs(grid.signed_index(0, k));
        if (j == 0) continue;
        const int shell = static_cast<int>(std::floor(std::log2(static_cast<double>(j))));
        if (shell >= shells) continue;
        for (std::size_t c = 0; c < m; ++c) acc[static_cast<std::size_t>(shell)].add(std::norm(uh[k * m + c]));
    }
    std::vector<double> out;
    for (const auto& a : acc) out.push_back(a.value() * grid.frequency_weight());
    return out;
}

DecayFit fit_decay(std::span<const double> energies, int first_shell, int last_shell) {
    double total = 0.0;
    for (double e : energies) total += e;
    const double floor = 1e-26 * std::max(total, std::numeric_limits<double>::min());

    DecayFit fit;
    std::vector<double> xs, ys;
    for (int k = first_shell; k <= last_shell && k < static_cast<int>(energies.size()); ++k) {
        if (energies[static_cast<std::size_t>(k)] <= floor) {
            fit.hit_floor = true;
            break;
        }
        xs.push_back(k);
        ys.push_back(std::log2(energies[static_cast<std::size_t>(k)]));
    }
    fit.shells = static_cast<int>(xs.size());
    if (xs.size() < 2) {
        // Decay to the floor within one shell of the start.
        const double e0 = energies[static_cast<std::size_t>(first_shell)];
        fit.index = 0.5 * std::log2(std::max(e0, floor) / floor);
        fit.hit_floor = true;
        return fit;
    }
    const double cnt = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / cnt;
        my += ys[i] / cnt;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (my + slope * (xs[i] - mx));
        res += r * r / cnt;
    }
    fit.index = -0.5 * slope;
    fit.residual = std::sqrt(res);
    return fit;
}

RegularityReport regularity_probe(const RegularityProblem& problem) {
    if (!problem.a || !problem.f) throw DomainError("regularity probe needs a coefficient and data");
    if (problem.points < 2048) throw DomainError("regularity probe needs at least 2048 points");
    const auto grid = GridSpec::cube(1, problem.extent, problem.points);

    auto sample = [&](const std::function<double(double)>& fn) {
        std::vector<Complex> v(problem.points);
        for (std::size_t j = 0; j < problem.points; ++j) v[j] = fn(grid.coordinate(0, j));
        return v;
    };
    const auto a = sample(problem.a);
    for (const auto& z : a)
        if (!(z.real() > 0.0)) throw DomainError("diffusion coefficient must be positive");
    const auto f = sample(problem.f);
    const DivergenceOperator op(grid, a);

    // Preconditioned conjugate gradients from zero.
    std::vector<Complex> u(problem.points, Complex{});
    std::vector<Complex> r = f;
    std::vector<Complex> z = op.precondition(r);
    std::vector<Complex> p = z;
    double rz = real_dot(r, z);
    const double f_norm = std::sqrt(real_dot(f, f));
    RegularityReport rep;
    double res_norm = f_norm;
    int it = 0;
    for (; it < 2000 && res_norm > 1e-14 * f_norm; ++it) {
        const auto ap = op.apply(p);
        const double alpha = rz / real_dot(p, ap);
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        res_norm = std::sqrt(real_dot(r, r));
        z = op.precondition(r);
        const double rz_next = real_dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    rep.solver_iterations = it;
    rep.solver_residual = f_norm > 0.0 ? res_norm / f_norm : 0.0;
    if (rep.solver_residual > 1e-10) throw NumericalFailure("regularity probe: solver did not converge");

    // Gaussian cutoff of width L/16: below 2e-8 beyond 3L/8 from the centre,
    // with a spectrum that is negligible from |j| = 32 on.
    const double width = problem.extent / 16.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double x = grid.coordinate(0, j) / width;
        u[j] *= std::exp(-0.5 * x * x);
    }
    const auto localized = SpectralField::from_values(grid, std::move(u));
    const auto energies = shell_energies(localized);

    int last = -1;
    while ((std::size_t{16} << (last + 1)) < problem.points) ++last;
    // |j| in [32, N/16): shells 5 .. log2(N/16) - 1
    auto fit = fit_decay(energies, 5, last);
    if (fit.shells < 2) {
        // Decay reached roundoff before the window: fit from the first shell instead.
        fit = fit_decay(energies, 1, last);
        fit.hit_floor = true;
    }

    rep.estimated_index = fit.index;
    rep.fit_residual = fit.residual;
    rep.shells_used = fit.shells;
    rep.smooth = fit.hit_floor || fit.index > 8.0;
    rep.inconclusive = !rep.smooth && fit.residual > 0.5;
    rep.predicted_index = std::min(problem.data_index, problem.coefficient_exponent - 1.0) + 2.0;
    rep.points = problem.points;
    rep.extent = problem.extent;
    return rep;
}

}  // namespace sobolab::coeff
