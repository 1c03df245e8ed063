#include "sobolab/spectral.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>

namespace sobolab::spectral {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "field container assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw DomainError("field container: truncated header");
    return value;
}

}  // namespace

// Layout: "SPFD", u32 version, u32 n, n x f64 extents, n x u64 points, u32 m,
// then value_count complex samples as (re, im) f64 pairs, row-major with the
// component index innermost.
void write_binary(const SpectralField& u, std::ostream& out) {
    const auto& g = u.grid();
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dimension));
    for (int a = 0; a < g.dimension; ++a) put<double>(out, g.extent[a]);
    for (int a = 0; a < g.dimension; ++a) put<std::uint64_t>(out, g.points[a]);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.components));
    for (const auto& z : u.values()) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
}

SpectralField read_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DomainError("field container: bad magic");
    if (get<std::uint32_t>(in) != kVersion) throw DomainError("field container: unsupported version");
    const auto n = get<std::uint32_t>(in);
    if (n < 1 || n > 3) throw DomainError("field container: bad dimension");
    std::array<double, 3> extents{};
    std::array<std::size_t, 3> points{};
    for (std::uint32_t a = 0; a < n; ++a) extents[a] = get<double>(in);
    for (std::uint32_t a = 0; a < n; ++a) points[a] = get<std::uint64_t>(in);
    const auto m = get<std::uint32_t>(in);
    const auto grid = GridSpec::make(std::span<const double>(extents.data(), n),
                                     std::span<const std::size_t>(points.data(), n),
                                     static_cast<int>(m));
    std::vector<Complex> values(grid.value_count());
    for (auto& z : values) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        z = Complex(re, im);
    }
    return SpectralField::from_values(grid, std::move(values));
}

void write_csv_slice(const SpectralField& u, std::ostream& out, int axis) {
    const auto& g = u.grid();
    if (axis < 0 || axis >= g.dimension) throw DomainError("csv slice: axis out of range");
    const auto m = static_cast<std::size_t>(g.components);
    const auto v = u.values();
    out << "x";
    for (std::size_t k = 0; k < m; ++k) out << ",re" << k << ",im" << k;
    out << '\n' << std::setprecision(17);
    std::array<std::size_t, 3> idx{};
    for (int a = 0; a < g.dimension; ++a) idx[a] = g.points[a] / 2;
    for (std::size_t j = 0; j < g.points[axis]; ++j) {
        idx[axis] = j;
        const std::size_t p = g.flatten(idx);
        out << g.coordinate(axis, j);
        for (std::size_t k = 0; k < m; ++k) out << ',' << v[p * m + k].real() << ',' << v[p * m + k].imag();
        out << '\n';
    }
}

}  // namespace sobolab::spectral
