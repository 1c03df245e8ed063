#include "sobolab/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sobolab::coeff {

namespace {

using Pt = std::array<double, 3>;

bool inside(const HolderFunction& g, const Pt& x) {
    for (int a = 0; a < g.dimension; ++a)
        if (x[a] < g.lower[a] || x[a] > g.upper[a]) return false;
    return true;
}

double distance(const Pt& x, const Pt& y, int n) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += (x[a] - y[a]) * (x[a] - y[a]);
    return std::sqrt(s);
}

Complex eval(const HolderFunction& g, const Pt& x) { return g.fn(std::span<const double>(x.data(), 3)); }

// Central differences, one-sided at the faces of the box.
std::array<Complex, 3> gradient(const HolderFunction& g, const Pt& x) {
    std::array<Complex, 3> d{};
    const double h = 1e-6 * g.diameter();
    for (int a = 0; a < g.dimension; ++a) {
        Pt p = x, m = x;
        p[a] = std::min(x[a] + h, g.upper[a]);
        m[a] = std::max(x[a] - h, g.lower[a]);
        d[a] = (eval(g, p) - eval(g, m)) / (p[a] - m[a]);
    }
    return d;
}

double gradient_distance(const std::array<Complex, 3>& a, const std::array<Complex, 3>& b, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s);
}

// Unit directions probed around each anchor: the axes, plus diagonals in 2D and 3D.
std::vector<Pt> directions(int n) {
    std::vector<Pt> dirs;
    for (int a = 0; a < n; ++a) {
        Pt e{};
        e[a] = 1.0;
        dirs.push_back(e);
    }
    if (n >= 2) {
        const double r = 1.0 / std::sqrt(2.0);
        dirs.push_back({r, r, 0.0});
        dirs.push_back({r, -r, 0.0});
    }
    return dirs;
}

Pt offset(const Pt& x, const Pt& dir, double h) { return {x[0] + h * dir[0], x[1] + h * dir[1], x[2] + h * dir[2]}; }

}  // namespace

double HolderFunction::diameter() const {
    double s = 0.0;
    for (int a = 0; a < dimension; ++a) s += (upper[a] - lower[a]) * (upper[a] - lower[a]);
    return std::sqrt(s);
}

HolderFunction HolderFunction::on_grid(const GridSpec& grid, double exponent,
                                       std::function<Complex(std::span<const double>)> fn) {
    HolderFunction g;
    g.fn = std::move(fn);
    g.exponent = exponent;
    g.dimension = grid.dimension;
    for (int a = 0; a < grid.dimension; ++a) {
        g.lower[a] = -0.5 * grid.extent[a];
        g.upper[a] = 0.5 * grid.extent[a];
    }
    return g;
}

std::vector<Pt> sample_anchors(const HolderFunction& g, const HolderSampling& sampling) {
    const int n = g.dimension;
    if (n < 1 || n > 3) throw DomainError("Hölder function dimension must be 1, 2 or 3");
    for (int a = 0; a < n; ++a)
        if (!(g.upper[a] > g.lower[a])) throw DomainError("empty Hölder function box");

    std::vector<Pt> anchors;
    Pt centre{};
    for (int a = 0; a < n; ++a) centre[a] = 0.5 * (g.lower[a] + g.upper[a]);
    anchors.push_back(centre);
    for (int mask = 0; mask < (1 << n); ++mask) {
        Pt c{};
        for (int a = 0; a < n; ++a) c[a] = (mask >> a & 1) ? g.upper[a] : g.lower[a];
        anchors.push_back(c);
    }
    const int per_axis = n == 1 ? 64 : (n == 2 ? 16 : 8);
    const int total = static_cast<int>(std::pow(per_axis + 1, n));
    for (int idx = 0; idx < total; ++idx) {
        Pt p{};
        int rest = idx;
        for (int a = 0; a < n; ++a) {
            const int i = rest % (per_axis + 1);
            rest /= per_axis + 1;
            p[a] = g.lower[a] + (g.upper[a] - g.lower[a]) * i / per_axis;
        }
        anchors.push_back(p);
    }
    std::mt19937_64 rng(sampling.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < sampling.random_anchors; ++k) {
        Pt p{};
        for (int a = 0; a < n; ++a) p[a] = g.lower[a] + (g.upper[a] - g.lower[a]) * unit(rng);
        anchors.push_back(p);
    }
    return anchors;
}

double sampled_sup(const HolderFunction& g, const HolderSampling& sampling) {
    double sup = 0.0;
    for (const auto& x : sample_anchors(g, sampling)) sup = std::max(sup, std::abs(eval(g, x)));
    return sup;
}

double holder_seminorm(const HolderFunction& g, double mu, const HolderSampling& sampling) {
    if (!(mu >= 0.0) || mu >= 2.0) throw DomainError("Hölder seminorm supports 0 <= mu < 2");
    const int n = g.dimension;
    const int order = mu > 1.0 ? 1 : 0;
    const double power = mu - order;

    auto quotient = [&](const Pt& x, const Pt& y) {
        const double r = distance(x, y, n);
        if (r == 0.0) return 0.0;
        const double diff = order == 0 ? std::abs(eval(g, x) - eval(g, y))
                                       : gradient_distance(gradient(g, x), gradient(g, y), n);
        return diff / std::pow(r, power);
    };

    double best = 0.0;
    const auto anchors = sample_anchors(g, sampling);
    const auto dirs = directions(n);
    const double diam = g.diameter();
    for (const auto& x : anchors) {
        for (int k = 0; k <= sampling.levels; ++k) {
            const double h = diam * std::ldexp(1.0, -k);
            for (const auto& dir : dirs) {
                for (double sign : {1.0, -1.0}) {
                    const Pt y = offset(x, dir, sign * h);
                    if (inside(g, y)) best = std::max(best, quotient(x, y));
                }
            }
        }
    }
    std::mt19937_64 rng(sampling.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < sampling.random_pairs; ++k) {
        Pt x{}, y{};
        for (int a = 0; a < n; ++a) {
            x[a] = g.lower[a] + (g.upper[a] - g.lower[a]) * unit(rng);
            y[a] = g.lower[a] + (g.upper[a] - g.lower[a]) * unit(rng);
        }
        best = std::max(best, quotient(x, y));
    }
    return best;
}

double holder_norm(const HolderFunction& g, double mu, const HolderSampling& sampling) {
    double norm = sampled_sup(g, sampling);
    if (mu > 1.0) {
        double grad_sup = 0.0;
        for (const auto& x : sample_anchors(g, sampling))
            grad_sup = std::max(grad_sup, gradient_distance(gradient(g, x), {}, g.dimension));
        norm += grad_sup;
    }
    if (mu > 0.0) norm += holder_seminorm(g, mu, sampling);
    return norm;
}

ExponentEstimate estimate_exponent(const HolderFunction& g, const HolderSampling& sampling) {
    const int n = g.dimension;
    const auto anchors = sample_anchors(g, sampling);
    const auto dirs = directions(n);
    const double diam = g.diameter();

    double scale = 0.0;
    for (const auto& x : anchors) scale = std::max(scale, std::abs(eval(g, x)));
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    constexpr int first_level = 6;
    const int last_level = std::min(sampling.levels, 18);
    std::vector<double> xs, ys;
    for (int k = first_level; k <= last_level; ++k) {
        const double h = diam * std::ldexp(1.0, -k);
        double m = 0.0;
        for (const auto& x : anchors) {
            for (const auto& dir : dirs) {
                const Pt p = offset(x, dir, h);
                const Pt q = offset(x, dir, -h);
                if (!inside(g, p) || !inside(g, q)) continue;
                m = std::max(m, std::abs(eval(g, p) - 2.0 * eval(g, x) + eval(g, q)));
            }
        }
        if (m > floor) {
            xs.push_back(std::log2(h));
            ys.push_back(std::log2(m));
        }
    }

    ExponentEstimate est;
    if (xs.size() < 3) {
        est.exponent = std::numeric_limits<double>::infinity();
        est.negligible = true;
        est.saturated = true;
        return est;
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
    est.exponent = std::min(slope, 2.0);
    est.saturated = slope >= 1.95;
    est.fit_residual = std::sqrt(res);
    return est;
}

bool declared_exponent_consistent(const HolderFunction& g, const HolderSampling& sampling) {
    const auto est = estimate_exponent(g, sampling);
    if (est.exponent < 0.5 * g.exponent) return false;
    if (est.saturated) return true;
    return est.exponent <= 2.0 * std::max(g.exponent, 1e-3);
}

double required_exponent_a(double sigma) { return std::abs(sigma); }
double required_exponent_b(double sigma) { return std::max(0.0, std::abs(sigma - 0.5) - 0.5); }
double required_exponent_c(double sigma) { return std::max(0.0, std::abs(sigma) - 1.0); }

bool exponent_meets(double measured, double required) {
    if (measured > required) return true;
    // Integer classes are closed: W^k_inf itself rather than a union of finer spaces.
    return std::floor(required) == required && std::abs(measured - required) <= 1e-2;
}

CoefficientClassReport coefficient_class_check(const fem::CoefficientSet& coeffs, double sigma,
                                               const std::array<double, 2>& lower,
                                               const std::array<double, 2>& upper,
                                               const HolderSampling& sampling) {
    CoefficientClassReport rep;
    rep.sigma = sigma;
    rep.required = {required_exponent_a(sigma), required_exponent_b(sigma), required_exponent_c(sigma)};
    rep.measured.fill(std::numeric_limits<double>::infinity());
    rep.saturated.fill(false);

    const int n = coeffs.dimension;
    const int m = coeffs.components;
    auto account = [&](int group, const fem::MatrixFunction& f) {
        if (!f) return;
        for (int k = 0; k < m; ++k) {
            for (int l = 0; l < m; ++l) {
                for (int part = 0; part < 2; ++part) {
                    HolderFunction h;
                    h.dimension = n;
                    h.lower = {lower[0], lower[1], 0.0};
                    h.upper = {upper[0], upper[1], 1.0};
                    h.fn = [f, k, l, part](std::span<const double> x) {
                        const Complex z = f(fem::Point{x[0], x[1]})(k, l);
                        return Complex(part == 0 ? z.real() : z.imag(), 0.0);
                    };
                    const auto est = estimate_exponent(h, sampling);
                    if (est.negligible) continue;
                    if (est.exponent < rep.measured[group]) {
                        rep.measured[group] = est.exponent;
                        rep.saturated[group] = est.saturated;
                    }
                }
            }
        }
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) account(0, coeffs.a[i][j]);
    for (int j = 0; j < n; ++j) {
        account(1, coeffs.b[j]);
        account(1, coeffs.d[j]);
    }
    account(2, coeffs.c);

    rep.pass = true;
    for (int g = 0; g < 3; ++g)
        rep.pass = rep.pass && exponent_meets(rep.measured[g], rep.required[g]);
    return rep;
}

}  // namespace sobolab::coeff
