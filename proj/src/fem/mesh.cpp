#include "sobolab/fem.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace sobolab::fem {

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

double distance(const Point& p, const Point& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); }

}  // namespace

Mesh Mesh::interval(double a, double b, int cells) {
    if (cells < 1 || !(b > a)) throw DomainError("interval mesh: need b > a and at least one cell");
    std::vector<Point> v(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) v[i] = {a + (b - a) * i / cells, 0.0};
    std::vector<std::array<int, 3>> c(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) c[i] = {i, i + 1, -1};
    std::vector<BoundaryFacet> f(2);
    f[0].nodes = {0, 0};
    f[0].tag = 1;
    f[1].nodes = {cells, cells};
    f[1].tag = 2;
    return from_parts(1, std::move(v), std::move(c), std::move(f));
}

Mesh Mesh::rectangle(double x0, double x1, double y0, double y1, int nx, int ny) {
    if (nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0))
        throw DomainError("rectangle mesh: need a nonempty box and at least one cell per axis");
    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<Point> v;
    v.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            v.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});
    std::vector<std::array<int, 3>> c;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            c.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            c.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    std::vector<BoundaryFacet> f;
    auto add = [&f](int a, int b, int tag) {
        BoundaryFacet facet;
        facet.nodes = {a, b};
        facet.tag = tag;
        f.push_back(facet);
    };
    for (int i = 0; i < nx; ++i) add(id(i, 0), id(i + 1, 0), 1);
    for (int j = 0; j < ny; ++j) add(id(nx, j), id(nx, j + 1), 2);
    for (int i = nx; i > 0; --i) add(id(i, ny), id(i - 1, ny), 3);
    for (int j = ny; j > 0; --j) add(id(0, j), id(0, j - 1), 4);
    return from_parts(2, std::move(v), std::move(c), std::move(f));
}

Mesh Mesh::from_parts(int dimension, std::vector<Point> vertices,
                      std::vector<std::array<int, 3>> cells, std::vector<BoundaryFacet> boundary) {
    if (dimension != 1 && dimension != 2) throw DomainError("mesh: dimension must be 1 or 2");
    Mesh m;
    m.dimension_ = dimension;
    m.vertices_ = std::move(vertices);
    m.cells_ = std::move(cells);
    m.facets_ = std::move(boundary);
    const int nv = m.nodes_per_cell();
    const auto n = static_cast<int>(m.vertices_.size());
    if (m.cells_.empty()) throw DomainError("mesh: no cells");

    for (std::size_t e = 0; e < m.cells_.size(); ++e) {
        for (int a = 0; a < nv; ++a)
            if (m.cells_[e][a] < 0 || m.cells_[e][a] >= n) throw DomainError("mesh: cell references a missing vertex");
        if (dimension == 1) m.cells_[e][2] = -1;
    }
    const double h = m.mesh_size();
    for (std::size_t e = 0; e < m.cells_.size(); ++e) {
        const double meas = m.cell_measure(e);
        const double scale = dimension == 1 ? h : h * h;
        if (!(meas > 1e-12 * scale))
            throw DomainError("mesh: degenerate cell " + std::to_string(e));
    }

    // Boundary entities are those owned by exactly one cell; every one must be tagged.
    if (dimension == 1) {
        std::map<int, std::vector<int>> owners;
        for (std::size_t e = 0; e < m.cells_.size(); ++e)
            for (int a = 0; a < 2; ++a) owners[m.cells_[e][a]].push_back(static_cast<int>(e));
        std::size_t free_count = 0;
        for (const auto& [node, list] : owners) free_count += list.size() == 1;
        if (free_count != m.facets_.size()) throw DomainError("mesh: boundary tags do not cover the boundary");
        for (auto& f : m.facets_) {
            f.nodes[1] = f.nodes[0];
            const auto it = owners.find(f.nodes[0]);
            if (it == owners.end() || it->second.size() != 1)
                throw DomainError("mesh: tagged vertex is not on the boundary");
            f.cell = it->second.front();
            const auto& cell = m.cells_[f.cell];
            const int other = cell[0] == f.nodes[0] ? cell[1] : cell[0];
            f.normal = {m.vertices_[f.nodes[0]][0] > m.vertices_[other][0] ? 1.0 : -1.0, 0.0};
            f.measure = 1.0;
        }
    } else {
        std::map<std::pair<int, int>, std::vector<int>> owners;
        for (std::size_t e = 0; e < m.cells_.size(); ++e)
            for (int a = 0; a < 3; ++a)
                owners[edge_key(m.cells_[e][a], m.cells_[e][(a + 1) % 3])].push_back(static_cast<int>(e));
        std::size_t free_count = 0;
        for (const auto& [edge, list] : owners) free_count += list.size() == 1;
        if (free_count != m.facets_.size()) throw DomainError("mesh: boundary tags do not cover the boundary");
        std::set<std::pair<int, int>> seen;
        for (auto& f : m.facets_) {
            const auto key = edge_key(f.nodes[0], f.nodes[1]);
            const auto it = owners.find(key);
            if (it == owners.end() || it->second.size() != 1)
                throw DomainError("mesh: tagged edge is not a boundary edge");
            if (!seen.insert(key).second) throw DomainError("mesh: boundary edge tagged twice");
            f.cell = it->second.front();
            const auto& cell = m.cells_[f.cell];
            int opposite = cell[0];
            for (int a = 0; a < 3; ++a)
                if (cell[a] != f.nodes[0] && cell[a] != f.nodes[1]) opposite = cell[a];
            const Point& p = m.vertices_[f.nodes[0]];
            const Point& q = m.vertices_[f.nodes[1]];
            const Point& r = m.vertices_[opposite];
            f.measure = distance(p, q);
            Point nrm{(q[1] - p[1]) / f.measure, -(q[0] - p[0]) / f.measure};
            if (nrm[0] * (r[0] - p[0]) + nrm[1] * (r[1] - p[1]) > 0.0) nrm = {-nrm[0], -nrm[1]};
            f.normal = nrm;
        }
    }
    std::set<int> bn;
    for (const auto& f : m.facets_) bn.insert(f.nodes.begin(), f.nodes.end());
    m.boundary_nodes_.assign(bn.begin(), bn.end());
    return m;
}

std::vector<int> Mesh::nodes_on(const std::set<int>& tags) const {
    std::set<int> out;
    for (const auto& f : facets_)
        if (tags.count(f.tag)) out.insert(f.nodes.begin(), f.nodes.end());
    return {out.begin(), out.end()};
}

std::set<int> Mesh::tags() const {
    std::set<int> t;
    for (const auto& f : facets_) t.insert(f.tag);
    return t;
}

std::vector<bool> Mesh::boundary_mask() const {
    std::vector<bool> mask(vertices_.size(), false);
    for (int i : boundary_nodes_) mask[i] = true;
    return mask;
}

double Mesh::mesh_size() const {
    double h = 0.0;
    for (const auto& c : cells_)
        for (int a = 0; a < nodes_per_cell(); ++a)
            for (int b = a + 1; b < nodes_per_cell(); ++b)
                h = std::max(h, distance(vertices_[c[a]], vertices_[c[b]]));
    return h;
}

double Mesh::cell_measure(std::size_t cell) const {
    const auto& c = cells_[cell];
    const Point& p = vertices_[c[0]];
    const Point& q = vertices_[c[1]];
    if (dimension_ == 1) return std::abs(q[0] - p[0]);
    const Point& r = vertices_[c[2]];
    return 0.5 * std::abs((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]));
}

std::array<Point, 3> Mesh::basis_gradients(std::size_t cell) const {
    const auto& c = cells_[cell];
    const Point& p = vertices_[c[0]];
    const Point& q = vertices_[c[1]];
    if (dimension_ == 1) {
        const double h = q[0] - p[0];
        return {Point{-1.0 / h, 0.0}, Point{1.0 / h, 0.0}, Point{}};
    }
    const Point& r = vertices_[c[2]];
    const double det = (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]);
    // Gradient of the barycentric coordinate of vertex a: rotated opposite edge / det.
    const Point g1{(r[1] - p[1]) / det, -(r[0] - p[0]) / det};
    const Point g2{-(q[1] - p[1]) / det, (q[0] - p[0]) / det};
    return {Point{-g1[0] - g2[0], -g1[1] - g2[1]}, g1, g2};
}

std::pair<Point, Point> Mesh::bounds() const {
    Point lo = vertices_.front();
    Point hi = vertices_.front();
    for (const auto& v : vertices_)
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min(lo[a], v[a]);
            hi[a] = std::max(hi[a], v[a]);
        }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Text format
//
//   dim 2
//   vertices N        then N lines "x y" ("x" in 1D)
//   cells M           then M lines "i j k" ("i j" in 1D), zero-based
//   boundary K        then K lines "i j tag" ("i tag" in 1D)

namespace {

std::string next_content_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    throw DomainError("mesh file: unexpected end of input");
}

std::size_t read_section(std::istream& in, const std::string& name) {
    std::istringstream ss(next_content_line(in));
    std::string word;
    long count = -1;
    if (!(ss >> word >> count) || word != name || count < 0)
        throw DomainError("mesh file: expected section '" + name + " <count>'");
    return static_cast<std::size_t>(count);
}

}  // namespace

Mesh Mesh::read(std::istream& in) {
    const auto dim = static_cast<int>(read_section(in, "dim"));
    if (dim != 1 && dim != 2) throw DomainError("mesh file: dim must be 1 or 2");
    std::vector<Point> v(read_section(in, "vertices"));
    for (auto& p : v) {
        std::istringstream ss(next_content_line(in));
        if (!(ss >> p[0])) throw DomainError("mesh file: bad vertex line");
        if (dim == 2 && !(ss >> p[1])) throw DomainError("mesh file: bad vertex line");
    }
    std::vector<std::array<int, 3>> c(read_section(in, "cells"));
    for (auto& cell : c) {
        std::istringstream ss(next_content_line(in));
        cell = {-1, -1, -1};
        for (int a = 0; a <= dim; ++a)
            if (!(ss >> cell[a])) throw DomainError("mesh file: bad cell line");
    }
    std::vector<BoundaryFacet> f(read_section(in, "boundary"));
    for (auto& facet : f) {
        std::istringstream ss(next_content_line(in));
        bool ok = static_cast<bool>(ss >> facet.nodes[0]);
        if (dim == 2) ok = ok && static_cast<bool>(ss >> facet.nodes[1]);
        ok = ok && static_cast<bool>(ss >> facet.tag);
        if (!ok) throw DomainError("mesh file: bad boundary line");
    }
    return from_parts(dim, std::move(v), std::move(c), std::move(f));
}

void Mesh::write(std::ostream& out) const {
    out.precision(17);
    out << "dim " << dimension_ << "\nvertices " << vertices_.size() << '\n';
    for (const auto& p : vertices_) {
        out << p[0];
        if (dimension_ == 2) out << ' ' << p[1];
        out << '\n';
    }
    out << "cells " << cells_.size() << '\n';
    for (const auto& c : cells_) {
        out << c[0] << ' ' << c[1];
        if (dimension_ == 2) out << ' ' << c[2];
        out << '\n';
    }
    out << "boundary " << facets_.size() << '\n';
    for (const auto& f : facets_) {
        out << f.nodes[0];
        if (dimension_ == 2) out << ' ' << f.nodes[1];
        out << ' ' << f.tag << '\n';
    }
}

}  // namespace sobolab::fem
