#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "bandspec/errors.hpp"

namespace bandspec {

enum class TruncationBc { Dirichlet, Neumann };

const char* to_string(TruncationBc bc);

// Parameters of the truncated band domain
//   Omega_L = { (x,y) : x,y >= 0, |x-y| <= d, x+y <= 2L }.
// The pitch h must divide both d and L so the diagonal boundary and the
// truncation cut pass through grid vertices.
struct DomainSpec {
    double d = 1.0;
    double L = 4.0;
    double h = 0.125;
    TruncationBc truncation_bc = TruncationBc::Dirichlet;

    // Band half-width in grid steps, m = d/h.
    int band_halfwidth() const;
    // Cut index n = L/h; vertices satisfy i + j <= 2n.
    int cut_index() const;

    // Throws NonIntegerPitch / DegenerateDomain.
    void validate() const;

    // Same domain, pitch halved.
    DomainSpec refined() const;
};

enum class BoundaryTag { RobinX, RobinY, DirichletDiag, Truncation };

const char* to_string(BoundaryTag tag);

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    BoundaryTag tag = BoundaryTag::Truncation;
};

// Structured triangular mesh. Vertices lie on the lattice x = i*h, y = j*h;
// every grid square is split along its diagonal parallel to y = x, and a
// triangle is kept iff all three vertices lie in the domain. All triangles
// are listed counterclockwise.
struct Mesh {
    double h = 0.0;
    std::vector<double> x, y;
    std::vector<int> gi, gj; // grid indices, x = gi*h, y = gj*h
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;

    std::size_t num_vertices() const { return x.size(); }
    std::size_t num_triangles() const { return triangles.size(); }

    double triangle_area(std::size_t t) const;
    double total_area() const;
};

Mesh build_mesh(const DomainSpec& spec);

// Sum of lengths of boundary edges carrying `tag`.
double boundary_length(const Mesh& mesh, BoundaryTag tag);

// Plain-text listing (vertices, triangles, tagged boundary edges).
void write_mesh(const Mesh& mesh, std::ostream& os);

// Axis-aligned rectangle [0,wx] x [0,wy] with nx-by-ny grid squares, all
// boundary edges tagged DirichletDiag (hard Dirichlet everywhere). Used by
// the rectangle oracle reproduction.
Mesh build_rectangle_mesh(double wx, double wy, int nx, int ny);

// L-shaped domain of arm width b truncated at arm length t = nt*h with
// pitch h = b/mb:
//   { 0 <= y <= b, 0 <= x <= t } u { 0 <= x <= b, 0 <= y <= t }.
// True boundary edges are tagged DirichletDiag, the two cut lines x = t
// and y = t are tagged Truncation.
Mesh build_lshape_mesh(double b, int mb, int nt);

} // namespace bandspec
