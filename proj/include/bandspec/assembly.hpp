#pragma once

#include <array>
#include <vector>

#include "bandspec/geometry.hpp"
#include "bandspec/sigma.hpp"
#include "bandspec/sparse.hpp"

namespace bandspec {

enum class DofStatus { Free, ConstrainedDiag, ConstrainedTruncation };

// Free/constrained classification of mesh vertices. Dirichlet wins over
// Robin at the corners where the diagonal boundary meets the axes.
struct DofMap {
    std::vector<DofStatus> status;      // per vertex
    std::vector<int> vertex_to_dof;     // -1 when constrained
    std::vector<int> dof_to_vertex;     // size n_free

    int n_free() const { return static_cast<int>(dof_to_vertex.size()); }
    bool is_free(int v) const { return vertex_to_dof[v] >= 0; }
};

// Constrains vertices on DirichletDiag edges, plus vertices on Truncation
// edges when truncation_bc = Dirichlet.
DofMap build_dofmap(const Mesh& mesh, TruncationBc truncation_bc);

// All vertices free (used for whole-mesh checks such as A*1 = 0).
DofMap all_free_dofmap(const Mesh& mesh);

// Discrete realization of the quadratic form: stiffness A, mass M, Robin
// boundary matrix B, and the form matrix K = A - B, all on free DOFs.
struct DiscreteForm {
    int n = 0;
    CsrMatrix A, M, B, K;
};

// P1 element matrices. Triangle vertices are coordinate pairs; throws
// DegenerateTriangle on zero area.
std::array<std::array<double, 3>, 3> local_stiffness(
    const std::array<double, 3>& xs, const std::array<double, 3>& ys);
std::array<std::array<double, 3>, 3> local_mass(
    const std::array<double, 3>& xs, const std::array<double, 3>& ys);

// Edge matrix of int sigma(s) phi_i phi_j ds along a Robin-tagged edge;
// 2-point Gauss, exact for linear sigma. The evaluation coordinate is y on
// RobinX edges and x on RobinY edges. Throws WrongTag otherwise.
std::array<std::array<double, 2>, 2> local_robin(const Mesh& mesh,
                                                 const BoundaryEdge& edge,
                                                 const SigmaProfile& profile);

DiscreteForm assemble(const Mesh& mesh, const SigmaProfile& profile,
                      const DofMap& dofmap);

} // namespace bandspec
