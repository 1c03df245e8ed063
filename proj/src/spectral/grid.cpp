#include "sobolab/spectral.hpp"

#include <string>

namespace sobolab::spectral {

GridSpec GridSpec::make(std::span<const double> extents, std::span<const std::size_t> points,
                        int components) {
    if (extents.size() != points.size() || extents.empty() || extents.size() > 3)
        throw DomainError("grid: dimension must be 1, 2 or 3 with one extent per axis");
    if (components < 1) throw DomainError("grid: component count must be positive");
    GridSpec g;
    g.dimension = static_cast<int>(extents.size());
    g.components = components;
    for (std::size_t a = 0; a < extents.size(); ++a) {
        if (!(extents[a] > 0.0) || !std::isfinite(extents[a]))
            throw DomainError("grid: extent must be positive and finite");
        if (points[a] < 4 || !is_power_of_two(points[a]))
            throw DomainError("grid: points per axis must be a power of two >= 4, got " +
                              std::to_string(points[a]));
        g.extent[a] = extents[a];
        g.points[a] = points[a];
    }
    return g;
}

GridSpec GridSpec::cube(int dimension, double extent, std::size_t points, int components) {
    if (dimension < 1 || dimension > 3) throw DomainError("grid: dimension must be 1, 2 or 3");
    std::array<double, 3> e{extent, extent, extent};
    std::array<std::size_t, 3> p{points, points, points};
    return make(std::span<const double>(e.data(), static_cast<std::size_t>(dimension)),
                std::span<const std::size_t>(p.data(), static_cast<std::size_t>(dimension)),
                components);
}

double GridSpec::cell_volume() const {
    double h = 1.0;
    for (int a = 0; a < dimension; ++a) h *= spacing(a);
    return h;
}

double GridSpec::frequency_weight() const {
    double w = 1.0;
    for (int a = 0; a < dimension; ++a) w /= extent[a];
    return w;
}

std::array<std::size_t, 3> GridSpec::unflatten(std::size_t p) const {
    std::array<std::size_t, 3> idx{};
    idx[2] = p % points[2];
    p /= points[2];
    idx[1] = p % points[1];
    idx[0] = p / points[1];
    return idx;
}

}  // namespace sobolab::spectral
