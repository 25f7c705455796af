#include "bandspec/assembly.hpp"

#include <cmath>

namespace bandspec {

DofMap build_dofmap(const Mesh& mesh, TruncationBc truncation_bc) {
    DofMap dm;
    dm.status.assign(mesh.num_vertices(), DofStatus::Free);
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag == BoundaryTag::Truncation &&
            truncation_bc == TruncationBc::Dirichlet) {
            for (int v : {e.a, e.b})
                if (dm.status[v] == DofStatus::Free)
                    dm.status[v] = DofStatus::ConstrainedTruncation;
        }
    }
    // Dirichlet wins at shared vertices, so tag these last.
    for (const auto& e : mesh.boundary_edges)
        if (e.tag == BoundaryTag::DirichletDiag) {
            dm.status[e.a] = DofStatus::ConstrainedDiag;
            dm.status[e.b] = DofStatus::ConstrainedDiag;
        }

    dm.vertex_to_dof.assign(mesh.num_vertices(), -1);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        if (dm.status[v] == DofStatus::Free) {
            dm.vertex_to_dof[v] = static_cast<int>(dm.dof_to_vertex.size());
            dm.dof_to_vertex.push_back(static_cast<int>(v));
        }
    return dm;
}

DofMap all_free_dofmap(const Mesh& mesh) {
    DofMap dm;
    dm.status.assign(mesh.num_vertices(), DofStatus::Free);
    dm.vertex_to_dof.resize(mesh.num_vertices());
    dm.dof_to_vertex.resize(mesh.num_vertices());
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        dm.vertex_to_dof[v] = static_cast<int>(v);
        dm.dof_to_vertex[v] = static_cast<int>(v);
    }
    return dm;
}

std::array<std::array<double, 3>, 3> local_stiffness(
    const std::array<double, 3>& xs, const std::array<double, 3>& ys) {
    // Gradient of P1 basis i is (b_i, c_i) / (2*area).
    double b[3], c[3];
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        b[i] = ys[j] - ys[k];
        c[i] = xs[k] - xs[j];
    }
    double twice_area = xs[1] * ys[2] - xs[2] * ys[1] + xs[2] * ys[0] -
                        xs[0] * ys[2] + xs[0] * ys[1] - xs[1] * ys[0];
    if (twice_area <= 0.0)
        throw DegenerateTriangle("triangle has nonpositive area");
    std::array<std::array<double, 3>, 3> ke{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            ke[i][j] = (b[i] * b[j] + c[i] * c[j]) / (2.0 * twice_area);
    return ke;
}

std::array<std::array<double, 3>, 3> local_mass(
    const std::array<double, 3>& xs, const std::array<double, 3>& ys) {
    double twice_area = xs[1] * ys[2] - xs[2] * ys[1] + xs[2] * ys[0] -
                        xs[0] * ys[2] + xs[0] * ys[1] - xs[1] * ys[0];
    if (twice_area <= 0.0)
        throw DegenerateTriangle("triangle has nonpositive area");
    double a12 = twice_area / 24.0; // area/12
    std::array<std::array<double, 3>, 3> me{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            me[i][j] = (i == j) ? 2.0 * a12 : a12;
    return me;
}

std::array<std::array<double, 2>, 2> local_robin(const Mesh& mesh,
                                                 const BoundaryEdge& edge,
                                                 const SigmaProfile& profile) {
    if (edge.tag != BoundaryTag::RobinX && edge.tag != BoundaryTag::RobinY)
        throw WrongTag("local_robin needs a Robin-tagged edge");
    // Arc-length coordinate along the axis the edge lies on.
    double sa = edge.tag == BoundaryTag::RobinX ? mesh.y[edge.a] : mesh.x[edge.a];
    double sb = edge.tag == BoundaryTag::RobinX ? mesh.y[edge.b] : mesh.x[edge.b];
    double len = std::abs(sb - sa);

    // 2-point Gauss on [0,1]: exact for cubic integrands, hence exact for
    // piecewise-linear sigma against P1 x P1 traces.
    const double g = 0.5 / std::sqrt(3.0);
    const double t[2] = {0.5 - g, 0.5 + g};
    std::array<std::array<double, 2>, 2> be{{{0.0, 0.0}, {0.0, 0.0}}};
    for (double tg : t) {
        double s = profile.eval(sa + tg * (sb - sa));
        double phi[2] = {1.0 - tg, tg};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                be[i][j] += 0.5 * len * s * phi[i] * phi[j];
    }
    return be;
}

DiscreteForm assemble(const Mesh& mesh, const SigmaProfile& profile,
                      const DofMap& dofmap) {
    const int n = dofmap.n_free();
    const std::size_t nt = mesh.num_triangles();

    // Each triangle owns 12 preassigned triplet slots (6 lower-triangle
    // entries for A and for M), so the element loop can run in parallel
    // while the accumulation order stays fixed.
    std::vector<Triplet> ta(nt * 6, Triplet{0, 0, 0.0});
    std::vector<Triplet> tm(nt * 6, Triplet{0, 0, 0.0});

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(nt); ++t) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
        std::array<double, 3> xs, ys;
        int dof[3];
        for (int i = 0; i < 3; ++i) {
            xs[i] = mesh.x[tri[i]];
            ys[i] = mesh.y[tri[i]];
            dof[i] = dofmap.vertex_to_dof[tri[i]];
        }
        auto ke = local_stiffness(xs, ys);
        auto me = local_mass(xs, ys);
        std::size_t slot = static_cast<std::size_t>(t) * 6;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j <= i; ++j) {
                if (dof[i] >= 0 && dof[j] >= 0) {
                    int r = std::max(dof[i], dof[j]);
                    int c = std::min(dof[i], dof[j]);
                    ta[slot] = {r, c, ke[i][j]};
                    tm[slot] = {r, c, me[i][j]};
                }
                ++slot;
            }
    }

    SparseSymMatrix a(n), m(n), b(n);
    a.lower = std::move(ta);
    m.lower = std::move(tm);

    if (!profile.is_zero()) {
        for (const auto& e : mesh.boundary_edges) {
            if (e.tag != BoundaryTag::RobinX && e.tag != BoundaryTag::RobinY)
                continue;
            auto be = local_robin(mesh, e, profile);
            int dof[2] = {dofmap.vertex_to_dof[e.a], dofmap.vertex_to_dof[e.b]};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j <= i; ++j)
                    if (dof[i] >= 0 && dof[j] >= 0)
                        b.add(dof[i], dof[j], be[i][j]);
        }
    }

    DiscreteForm form;
    form.n = n;
    form.A = to_csr(a);
    form.M = to_csr(m);
    form.B = to_csr(b);
    form.K = csr_add(1.0, form.A, -1.0, form.B);
    return form;
}

} // namespace bandspec
