#include "bandspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

namespace bandspec {

namespace {

// Nearest integer to v/h, or -1 when v is not an integer multiple of h.
int exact_ratio(double v, double h) {
    double r = v / h;
    double n = std::round(r);
    if (n < 0.5 || std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r)))
        return -1;
    return static_cast<int>(n);
}

struct LatticeBuilder {
    double h;
    int imax, jmax; // bounding box, inclusive
    std::function<bool(int, int)> inside;
    std::function<BoundaryTag(int ia, int ja, int ib, int jb)> classify;

    Mesh build() const {
        Mesh mesh;
        mesh.h = h;
        std::vector<int> id(static_cast<std::size_t>(imax + 1) * (jmax + 1), -1);
        auto idx = [&](int i, int j) -> int& {
            return id[static_cast<std::size_t>(j) * (imax + 1) + i];
        };
        for (int j = 0; j <= jmax; ++j)
            for (int i = 0; i <= imax; ++i)
                if (inside(i, j)) {
                    idx(i, j) = static_cast<int>(mesh.x.size());
                    mesh.x.push_back(i * h);
                    mesh.y.push_back(j * h);
                    mesh.gi.push_back(i);
                    mesh.gj.push_back(j);
                }

        // Split each grid square along the diagonal parallel to y = x;
        // keep a triangle iff all three corners are in the domain.
        std::map<std::pair<int, int>, int> edge_count;
        auto add_tri = [&](int a, int b, int c) {
            mesh.triangles.push_back({a, b, c});
            for (auto [p, q] : {std::pair{a, b}, {b, c}, {c, a}})
                ++edge_count[{std::min(p, q), std::max(p, q)}];
        };
        for (int j = 0; j < jmax; ++j)
            for (int i = 0; i < imax; ++i) {
                int v00 = idx(i, j);
                int v10 = (i + 1 <= imax) ? idx(i + 1, j) : -1;
                int v11 = (i + 1 <= imax && j + 1 <= jmax) ? idx(i + 1, j + 1) : -1;
                int v01 = (j + 1 <= jmax) ? idx(i, j + 1) : -1;
                if (v00 >= 0 && v10 >= 0 && v11 >= 0)
                    add_tri(v00, v10, v11);
                if (v00 >= 0 && v11 >= 0 && v01 >= 0)
                    add_tri(v00, v11, v01);
            }

        for (const auto& [e, cnt] : edge_count)
            if (cnt == 1)
                mesh.boundary_edges.push_back(
                    {e.first, e.second,
                     classify(mesh.gi[e.first], mesh.gj[e.first],
                              mesh.gi[e.second], mesh.gj[e.second])});
        return mesh;
    }
};

} // namespace

const char* to_string(TruncationBc bc) {
    return bc == TruncationBc::Dirichlet ? "dirichlet" : "neumann";
}

const char* to_string(BoundaryTag tag) {
    switch (tag) {
    case BoundaryTag::RobinX: return "RobinX";
    case BoundaryTag::RobinY: return "RobinY";
    case BoundaryTag::DirichletDiag: return "DirichletDiag";
    case BoundaryTag::Truncation: return "Truncation";
    }
    return "?";
}

int DomainSpec::band_halfwidth() const {
    int m = exact_ratio(d, h);
    if (m < 1)
        throw NonIntegerPitch("pitch h must divide d exactly (d=" +
                              std::to_string(d) + ", h=" + std::to_string(h) + ")");
    return m;
}

int DomainSpec::cut_index() const {
    int n = exact_ratio(L, h);
    if (n < 1)
        throw NonIntegerPitch("pitch h must divide L exactly (L=" +
                              std::to_string(L) + ", h=" + std::to_string(h) + ")");
    return n;
}

void DomainSpec::validate() const {
    if (!(d > 0) || !(h > 0) || !(L > 0))
        throw DegenerateDomain("d, h, L must be positive");
    if (L <= d)
        throw DegenerateDomain("truncation length L must exceed d");
    if (L < 2 * d - 1e-12 * d)
        throw DegenerateDomain("truncation length L must be at least 2d");
    (void)band_halfwidth();
    (void)cut_index();
}

DomainSpec DomainSpec::refined() const {
    DomainSpec r = *this;
    r.h = h / 2.0;
    return r;
}

double Mesh::triangle_area(std::size_t t) const {
    const auto& tri = triangles[t];
    double ax = x[tri[1]] - x[tri[0]], ay = y[tri[1]] - y[tri[0]];
    double bx = x[tri[2]] - x[tri[0]], by = y[tri[2]] - y[tri[0]];
    return 0.5 * (ax * by - ay * bx);
}

double Mesh::total_area() const {
    double a = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t)
        a += triangle_area(t);
    return a;
}

Mesh build_mesh(const DomainSpec& spec) {
    spec.validate();
    const int m = spec.band_halfwidth();
    const int n = spec.cut_index();

    LatticeBuilder lb;
    lb.h = spec.h;
    lb.imax = 2 * n; // i + j <= 2n and j >= i - m bound i by 2n
    lb.jmax = 2 * n;
    lb.inside = [m, n](int i, int j) {
        return std::abs(i - j) <= m && i + j <= 2 * n;
    };
    lb.classify = [m](int ia, int ja, int ib, int jb) {
        if (ia == 0 && ib == 0) return BoundaryTag::RobinX;
        if (ja == 0 && jb == 0) return BoundaryTag::RobinY;
        if (ja - ia == m && jb - ib == m) return BoundaryTag::DirichletDiag;
        if (ia - ja == m && ib - jb == m) return BoundaryTag::DirichletDiag;
        return BoundaryTag::Truncation;
    };
    return lb.build();
}

double boundary_length(const Mesh& mesh, BoundaryTag tag) {
    double len = 0.0;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != tag) continue;
        double dx = mesh.x[e.b] - mesh.x[e.a];
        double dy = mesh.y[e.b] - mesh.y[e.a];
        len += std::hypot(dx, dy);
    }
    return len;
}

void write_mesh(const Mesh& mesh, std::ostream& os) {
    os << "vertices " << mesh.num_vertices() << "\n";
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        os << v << " " << mesh.x[v] << " " << mesh.y[v] << "\n";
    os << "triangles " << mesh.num_triangles() << "\n";
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
        os << t << " " << mesh.triangles[t][0] << " " << mesh.triangles[t][1]
           << " " << mesh.triangles[t][2] << "\n";
    os << "boundary_edges " << mesh.boundary_edges.size() << "\n";
    for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e)
        os << e << " " << mesh.boundary_edges[e].a << " "
           << mesh.boundary_edges[e].b << " "
           << to_string(mesh.boundary_edges[e].tag) << "\n";
}

Mesh build_rectangle_mesh(double wx, double wy, int nx, int ny) {
    if (nx < 1 || ny < 1 || !(wx > 0) || !(wy > 0))
        throw DegenerateDomain("rectangle mesh needs positive sides and counts");
    double hx = wx / nx, hy = wy / ny;
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
        throw NonIntegerPitch("rectangle mesh requires square cells");

    LatticeBuilder lb;
    lb.h = hx;
    lb.imax = nx;
    lb.jmax = ny;
    lb.inside = [](int, int) { return true; };
    lb.classify = [](int, int, int, int) { return BoundaryTag::DirichletDiag; };
    return lb.build();
}

Mesh build_lshape_mesh(double b, int mb, int nt) {
    if (!(b > 0) || mb < 1 || nt < mb)
        throw DegenerateDomain("lshape mesh needs b > 0 and nt >= mb >= 1");
    double h = b / mb;

    LatticeBuilder lb;
    lb.h = h;
    lb.imax = nt;
    lb.jmax = nt;
    lb.inside = [mb, nt](int i, int j) {
        return (j <= mb && i <= nt) || (i <= mb && j <= nt);
    };
    lb.classify = [nt](int ia, int ja, int ib, int jb) {
        if (ia == nt && ib == nt) return BoundaryTag::Truncation;
        if (ja == nt && jb == nt) return BoundaryTag::Truncation;
        return BoundaryTag::DirichletDiag;
    };
    return lb.build();
}

} // namespace bandspec
