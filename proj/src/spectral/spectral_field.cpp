#include "sobolab/spectral.hpp"

#include "fft.hpp"

namespace sobolab::spectral {

SpectralField::SpectralField(const GridSpec& grid, std::vector<Complex> data, bool is_fourier)
    : grid_(grid) {
    if (data.size() != grid.value_count())
        throw GridMismatch("field: sample count does not match the grid");
    for (const auto& z : data)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw DomainError("field: non-finite sample");
    if (is_fourier) {
        fourier_ = std::move(data);
        have_fourier_ = true;
    } else {
        values_ = std::move(data);
        have_values_ = true;
    }
}

SpectralField SpectralField::from_values(const GridSpec& grid, std::vector<Complex> values) {
    return SpectralField(grid, std::move(values), false);
}

SpectralField SpectralField::from_fourier(const GridSpec& grid, std::vector<Complex> coefficients) {
    return SpectralField(grid, std::move(coefficients), true);
}

SpectralField SpectralField::zeros(const GridSpec& grid) {
    SpectralField f(grid, std::vector<Complex>(grid.value_count()), false);
    f.fourier_.assign(grid.value_count(), Complex{});
    f.have_fourier_ = true;
    return f;
}

SpectralField SpectralField::sample(const GridSpec& grid,
                                    const std::function<Complex(std::span<const double>, int)>& fn) {
    std::vector<Complex> v(grid.value_count());
    const auto m = static_cast<std::size_t>(grid.components);
    std::array<double, 3> x{};
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const auto idx = grid.unflatten(p);
        for (int a = 0; a < grid.dimension; ++a) x[a] = grid.coordinate(a, idx[a]);
        const std::span<const double> xs(x.data(), static_cast<std::size_t>(grid.dimension));
        for (std::size_t k = 0; k < m; ++k) v[p * m + k] = fn(xs, static_cast<int>(k));
    }
    return from_values(grid, std::move(v));
}

SpectralField::SpectralField(const SpectralField& other) : grid_(other.grid_) {
    std::lock_guard lock(*other.cache_mutex_);
    values_ = other.values_;
    fourier_ = other.fourier_;
    have_values_ = other.have_values_;
    have_fourier_ = other.have_fourier_;
}

SpectralField& SpectralField::operator=(const SpectralField& other) {
    if (this == &other) return *this;
    SpectralField copy(other);
    *this = std::move(copy);
    return *this;
}

SpectralField::SpectralField(SpectralField&& other) noexcept
    : grid_(other.grid_),
      values_(std::move(other.values_)),
      fourier_(std::move(other.fourier_)),
      have_values_(other.have_values_),
      have_fourier_(other.have_fourier_) {
    other.have_values_ = other.have_fourier_ = false;
}

SpectralField& SpectralField::operator=(SpectralField&& other) noexcept {
    grid_ = other.grid_;
    values_ = std::move(other.values_);
    fourier_ = std::move(other.fourier_);
    have_values_ = other.have_values_;
    have_fourier_ = other.have_fourier_;
    other.have_values_ = other.have_fourier_ = false;
    return *this;
}

std::span<const Complex> SpectralField::values() const {
    std::lock_guard lock(*cache_mutex_);
    if (!have_values_ && have_fourier_) {
        values_.resize(fourier_.size());
        detail::inverse_transform(grid_, fourier_, values_);
        have_values_ = true;
    }
    return values_;
}

std::span<const Complex> SpectralField::fourier() const {
    std::lock_guard lock(*cache_mutex_);
    if (!have_fourier_ && have_values_) {
        fourier_.resize(values_.size());
        detail::forward_transform(grid_, values_, fourier_);
        have_fourier_ = true;
    }
    return fourier_;
}

void SpectralField::assign_values(std::vector<Complex> values) {
    if (values.size() != grid_.value_count())
        throw GridMismatch("field: sample count does not match the grid");
    std::lock_guard lock(*cache_mutex_);
    values_ = std::move(values);
    have_values_ = true;
    fourier_.clear();
    have_fourier_ = false;
}

std::array<double, 3> SpectralField::point(std::size_t p) const {
    const auto idx = grid_.unflatten(p);
    std::array<double, 3> x{};
    for (int a = 0; a < grid_.dimension; ++a) x[a] = grid_.coordinate(a, idx[a]);
    return x;
}

std::array<double, 3> SpectralField::frequency(std::size_t p) const {
    const auto idx = grid_.unflatten(p);
    std::array<double, 3> xi{};
    for (int a = 0; a < grid_.dimension; ++a) xi[a] = grid_.frequency(a, idx[a]);
    return xi;
}

double SpectralField::frequency_norm_squared(std::size_t p) const {
    const auto xi = frequency(p);
    return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
}

// ---------------------------------------------------------------------------

FourierMultiplier FourierMultiplier::scalar(std::function<Complex(std::span<const double>)> sym) {
    return FourierMultiplier{[sym = std::move(sym)](std::span<const double> xi, std::span<Complex> mat) {
        const Complex value = sym(xi);
        const auto m = static_cast<std::size_t>(std::llround(std::sqrt(double(mat.size()))));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) mat[r * m + c] = r == c ? value : Complex{};
    }};
}

FourierMultiplier FourierMultiplier::bessel(double t) {
    if (!std::isfinite(t)) throw DomainError("bessel potential: order must be finite");
    return scalar([t](std::span<const double> xi) {
        double r2 = 0.0;
        for (double x : xi) r2 += x * x;
        return Complex(std::pow(1.0 + r2, 0.5 * t), 0.0);
    });
}

SpectralField apply_multiplier(const SpectralField& u, const FourierMultiplier& multiplier) {
    const auto& grid = u.grid();
    const auto m = static_cast<std::size_t>(grid.components);
    const auto uh = u.fourier();
    std::vector<Complex> out(uh.size());
    std::vector<Complex> mat(m * m);
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const auto xi = u.frequency(p);
        multiplier.symbol(std::span<const double>(xi.data(), static_cast<std::size_t>(grid.dimension)),
                          mat);
        for (std::size_t r = 0; r < m; ++r) {
            Complex acc{};
            for (std::size_t c = 0; c < m; ++c) acc += mat[r * m + c] * uh[p * m + c];
            out[p * m + r] = acc;
        }
    }
    return SpectralField::from_fourier(grid, std::move(out));
}

namespace {

double bessel_weight(const SpectralField& u, std::size_t p, double s) {
    return s == 0.0 ? 1.0 : std::pow(1.0 + u.frequency_norm_squared(p), s);
}

}  // namespace

SpectralField bessel_potential(const SpectralField& u, double t) {
    if (!std::isfinite(t)) throw DomainError("bessel potential: order must be finite");
    if (t == 0.0) return u;
    const auto& grid = u.grid();
    const auto m = static_cast<std::size_t>(grid.components);
    const auto uh = u.fourier();
    std::vector<Complex> out(uh.size());
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const double w = std::pow(1.0 + u.frequency_norm_squared(p), 0.5 * t);
        for (std::size_t k = 0; k < m; ++k) out[p * m + k] = w * uh[p * m + k];
    }
    return SpectralField::from_fourier(grid, std::move(out));
}

double sobolev_norm(const SpectralField& u, double s) {
    if (!std::isfinite(s)) throw DomainError("sobolev norm: index must be finite");
    const auto& grid = u.grid();
    const auto m = static_cast<std::size_t>(grid.components);
    const auto uh = u.fourier();
    CompensatedSum<double> acc;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const double w = bessel_weight(u, p, s);
        for (std::size_t k = 0; k < m; ++k) acc.add(w * std::norm(uh[p * m + k]));
    }
    return std::sqrt(grid.frequency_weight() * acc.value());
}

Complex sobolev_inner(const SpectralField& u, const SpectralField& v, double s) {
    require_same_grid(u, v);
    const auto& grid = u.grid();
    const auto m = static_cast<std::size_t>(grid.components);
    const auto uh = u.fourier();
    const auto vh = v.fourier();
    CompensatedSum<Complex> acc;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const double w = bessel_weight(u, p, s);
        for (std::size_t k = 0; k < m; ++k) acc.add(w * std::conj(uh[p * m + k]) * vh[p * m + k]);
    }
    return grid.frequency_weight() * acc.value();
}

Complex dual_product(const SpectralField& u, const SpectralField& v) {
    require_same_grid(u, v);
    const auto& grid = u.grid();
    const auto m = static_cast<std::size_t>(grid.components);
    const auto uh = u.fourier();
    const auto vh = v.fourier();
    CompensatedSum<Complex> acc;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        auto idx = grid.unflatten(p);
        for (int a = 0; a < grid.dimension; ++a) idx[a] = grid.negated_slot(a, idx[a]);
        const std::size_t q = grid.flatten(idx);
        for (std::size_t k = 0; k < m; ++k) acc.add(uh[q * m + k] * vh[p * m + k]);
    }
    return grid.frequency_weight() * acc.value();
}

double sample_l2_norm(const SpectralField& u) {
    CompensatedSum<double> acc;
    for (const auto& z : u.values()) acc.add(std::norm(z));
    return std::sqrt(u.grid().cell_volume() * acc.value());
}

SpectralField conjugate(const SpectralField& u) {
    const auto v = u.values();
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
    return SpectralField::from_values(u.grid(), std::move(out));
}

SpectralField scaled(const SpectralField& u, Complex alpha) {
    const auto v = u.values();
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = alpha * v[i];
    return SpectralField::from_values(u.grid(), std::move(out));
}

SpectralField axpy(Complex alpha, const SpectralField& u, const SpectralField& v) {
    require_same_grid(u, v);
    const auto a = u.values();
    const auto b = v.values();
    std::vector<Complex> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i] + b[i];
    return SpectralField::from_values(u.grid(), std::move(out));
}

SpectralField multiply_pointwise(const SpectralField& u, std::span<const Complex> scalar_samples) {
    const auto& grid = u.grid();
    if (scalar_samples.size() != grid.point_count())
        throw GridMismatch("multiply_pointwise: scalar samples do not match the grid");
    const auto m = static_cast<std::size_t>(grid.components);
    const auto v = u.values();
    std::vector<Complex> out(v.size());
    for (std::size_t p = 0; p < grid.point_count(); ++p)
        for (std::size_t k = 0; k < m; ++k) out[p * m + k] = scalar_samples[p] * v[p * m + k];
    return SpectralField::from_values(grid, std::move(out));
}

double sup_norm(const SpectralField& u) {
    double s = 0.0;
    for (const auto& z : u.values()) s = std::max(s, std::abs(z));
    return s;
}

RestrictResult restrict_support(const SpectralField& u,
                                const std::function<bool(std::span<const double>)>& inside) {
    const auto& grid = u.grid();
    const auto m = static_cast<std::size_t>(grid.components);
    const auto v = u.values();
    std::vector<Complex> out(v.size());
    bool any = false;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const auto x = u.point(p);
        if (!inside(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dimension))))
            continue;
        any = true;
        for (std::size_t k = 0; k < m; ++k) out[p * m + k] = v[p * m + k];
    }
    return {SpectralField::from_values(grid, std::move(out)), !any};
}

double tail_energy_fraction(const SpectralField& u, double layer) {
    const auto& grid = u.grid();
    const auto m = static_cast<std::size_t>(grid.components);
    const auto v = u.values();
    CompensatedSum<double> total;
    CompensatedSum<double> tail;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const auto x = u.point(p);
        bool near_face = false;
        for (int a = 0; a < grid.dimension; ++a)
            near_face = near_face || std::abs(x[a]) >= (0.5 - layer) * grid.extent[a];
        for (std::size_t k = 0; k < m; ++k) {
            const double e = std::norm(v[p * m + k]);
            total.add(e);
            if (near_face) tail.add(e);
        }
    }
    const double t = total.value();
    return t > 0.0 ? tail.value() / t : 0.0;
}

void require_same_grid(const SpectralField& u, const SpectralField& v) {
    if (!(u.grid() == v.grid())) throw GridMismatch("fields live on different grids");
}

}  // namespace sobolab::spectral

namespace sobolab::spectral {

SpectralField random_band_limited(const GridSpec& grid, std::mt19937_64& rng, double max_frequency) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto m = static_cast<std::size_t>(grid.components);
    std::vector<Complex> coef(grid.value_count());
    const double k2 = max_frequency * max_frequency;
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const auto idx = grid.unflatten(p);
        bool nyquist = false;
        double r2 = 0.0;
        for (int a = 0; a < grid.dimension; ++a) {
            nyquist = nyquist || idx[a] == grid.points[a] / 2;
            const double xi = grid.frequency(a, idx[a]);
            r2 += xi * xi;
        }
        if (nyquist || r2 > k2) continue;
        for (std::size_t k = 0; k < m; ++k) {
            const double re = normal(rng);
            const double im = normal(rng);
            coef[p * m + k] = Complex(re, im);
        }
    }
    return SpectralField::from_fourier(grid, std::move(coef));
}

}  // namespace sobolab::spectral
