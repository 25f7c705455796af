#include <doctest.h>

#include <cmath>
#include <map>

#include "bandspec/analysis.hpp"
#include "bandspec/assembly.hpp"

using namespace bandspec;

namespace {

std::vector<double> csr_dense_row_major(const CsrMatrix& a) {
    std::vector<double> full(static_cast<std::size_t>(a.n) * a.n, 0.0);
    for (int i = 0; i < a.n; ++i)
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
            full[static_cast<std::size_t>(i) * a.n + a.col[p]] = a.val[p];
    return full;
}

} // namespace

TEST_CASE("end-to-end solve drops below the transverse threshold") {
    DomainSpec spec{1.0, 6.0, 0.125, TruncationBc::Dirichlet};
    auto out = solve_spectrum(spec, SigmaProfile::constant(0.0), 3);
    REQUIRE(out.result.eigenvalues.size() == 3);
    CHECK(out.n_free > 0);
    CHECK(out.result.eigenvalues[0] < oracles::strip_threshold(1.0));
    CHECK(out.result.eigenvalues[0] < out.result.eigenvalues[1]);
    for (double r : out.result.residuals) CHECK(r <= 1e-7);
}

TEST_CASE("rectangle reproduction converges to the closed form") {
    double coarse = rectangle_fem_E0(1.0, 2.0, 1.0 / 8);
    double fine = rectangle_fem_E0(1.0, 2.0, 1.0 / 16);
    double exact = oracles::rect_ground_state(1.0, 2.0);
    CHECK(coarse > exact); // Dirichlet FEM bounds from above
    CHECK(fine > exact);
    CHECK(fine < coarse);
    CHECK(std::abs(richardson(coarse, fine) - exact) <= 1e-4 * exact);
}

TEST_CASE("ground state respects the x <-> y mirror symmetry") {
    DomainSpec spec{1.0, 4.0, 0.25, TruncationBc::Dirichlet};
    auto out = solve_spectrum(spec, SigmaProfile::constant(0.5), 1);
    const auto& u = out.result.eigenvectors.at(0);

    Mesh mesh = build_mesh(spec);
    DofMap dm = build_dofmap(mesh, spec.truncation_bc);
    std::map<std::pair<int, int>, int> vert;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        vert[{mesh.gi[v], mesh.gj[v]}] = static_cast<int>(v);
    double umax = 0.0;
    for (double x : u) umax = std::max(umax, std::abs(x));
    REQUIRE(umax > 0.0);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        if (!dm.is_free(static_cast<int>(v))) continue;
        int w = vert.at({mesh.gj[v], mesh.gi[v]});
        REQUIRE(dm.is_free(w));
        double a = u[dm.vertex_to_dof[v]];
        double b = u[dm.vertex_to_dof[w]];
        CHECK(std::abs(a - b) <= 1e-6 * umax);
    }
}

TEST_CASE("localization measure: trivial radii") {
    DomainSpec spec{1.0, 3.0, 0.25, TruncationBc::Dirichlet};
    Mesh mesh = build_mesh(spec);
    DofMap dm = build_dofmap(mesh, spec.truncation_bc);
    DiscreteForm form = assemble(mesh, SigmaProfile::constant(0.0), dm);
    std::vector<double> ones(form.n, 1.0);
    CHECK(localization_measure(mesh, dm, form.M, ones, 1e9) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(localization_measure(mesh, dm, form.M, ones, -1.0) == 0.0);
    double half = localization_measure(mesh, dm, form.M, ones, 3.0);
    CHECK(half > 0.0);
    CHECK(half < 1.0);
}

TEST_CASE("dilation covariance is exact at the matrix level") {
    // (d, gamma, h, L) -> (2d, gamma/2, 2h, 2L) rescales the form by
    // x = alpha x': stiffness and Robin entries are invariant, mass scales
    // by alpha^2 = 4, eigenvalues by 1/4.
    DomainSpec s1{1.0, 2.0, 0.25, TruncationBc::Dirichlet};
    DomainSpec s2{2.0, 4.0, 0.50, TruncationBc::Dirichlet};
    Mesh m1 = build_mesh(s1), m2 = build_mesh(s2);
    REQUIRE(m1.num_vertices() == m2.num_vertices());
    DofMap d1 = build_dofmap(m1, s1.truncation_bc);
    DofMap d2 = build_dofmap(m2, s2.truncation_bc);
    REQUIRE(d1.n_free() == d2.n_free());
    DiscreteForm f1 = assemble(m1, SigmaProfile::constant(-1.0), d1);
    DiscreteForm f2 = assemble(m2, SigmaProfile::constant(-0.5), d2);

    auto K1 = csr_dense_row_major(f1.K), K2 = csr_dense_row_major(f2.K);
    auto M1 = csr_dense_row_major(f1.M), M2 = csr_dense_row_major(f2.M);
    REQUIRE(K1.size() == K2.size());
    for (std::size_t i = 0; i < K1.size(); ++i) {
        CHECK(K1[i] == K2[i]);          // exact in floating point
        CHECK(4.0 * M1[i] == M2[i]);    // powers of two throughout
    }

    auto e1 = solve_spectrum(s1, SigmaProfile::constant(-1.0), 2);
    auto e2 = solve_spectrum(s2, SigmaProfile::constant(-0.5), 2);
    for (int j = 0; j < 2; ++j)
        CHECK(e2.result.eigenvalues[j] ==
              doctest::Approx(e1.result.eigenvalues[j] / 4).epsilon(1e-9));
}

TEST_CASE("variational monotonicity of the sweep in the coupling") {
    DomainSpec spec{1.0, 6.0, 0.125, TruncationBc::Dirichlet};
    auto rows = sigma_sweep(spec, {0.0, 1.0, 2.0}, 3);
    REQUIRE(rows.size() == 3);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        CHECK(rows[r].E0 < rows[r - 1].E0);
        REQUIRE(rows[r].eigenvalues.size() == rows[r - 1].eigenvalues.size());
        for (std::size_t j = 0; j < rows[r].eigenvalues.size(); ++j)
            CHECK(rows[r].eigenvalues[j] <= rows[r - 1].eigenvalues[j] + 1e-10);
    }
    CHECK(rows[0].verdict == BoundStateVerdict::Exists::Yes);
}

TEST_CASE("bound state detection: geometric case is certified") {
    DomainSpec spec{1.0, 6.0, 0.125, TruncationBc::Dirichlet};
    auto v = detect_bound_state(spec, SigmaProfile::constant(0.0));
    CHECK(v.exists == BoundStateVerdict::Exists::Yes);
    CHECK(v.E0_extrapolated < oracles::strip_threshold(1.0));
    CHECK(v.gap_to_threshold > 0.0);
    CHECK(v.localization > 0.5);
    CHECK(v.truncation_drift < 1e-4);
    CHECK(v.raw_E0.size() == 4);
}

TEST_CASE("bound state detection: strong repulsion is rejected") {
    DomainSpec spec{1.0, 3.0, 0.125, TruncationBc::Dirichlet};
    auto v = detect_bound_state(spec, SigmaProfile::constant(-50.0));
    CHECK(v.exists == BoundStateVerdict::Exists::No);
    CHECK(v.localization < 0.5);
}

TEST_CASE("convergence study tracks the corner-limited rate") {
    // The mixed-boundary corners at (d,0) and (0,d) carry an r^(2/3)
    // singularity, so the eigenvalue converges at order 4/3, not 2.
    DomainSpec spec{1.0, 4.0, 0.25, TruncationBc::Dirichlet};
    auto rep = convergence_study(spec, SigmaProfile::constant(0.0), 3);
    REQUIRE(rep.records.size() == 3);
    CHECK(rep.records[1].eigenvalues[0] < rep.records[0].eigenvalues[0]);
    CHECK(rep.records[2].eigenvalues[0] < rep.records[1].eigenvalues[0]);
    CHECK(rep.extrapolated_E0 < rep.records[2].eigenvalues[0]);
    REQUIRE(rep.observed_order.has_value());
    CHECK(*rep.observed_order > 1.2);
    CHECK(*rep.observed_order < 1.6);
}

TEST_CASE("essential spectrum probe over a growing box") {
    DomainSpec base{1.0, 3.0, 0.125, TruncationBc::Dirichlet};
    auto rep = essential_spectrum_probe(base, SigmaProfile::constant(0.0),
                                        {3.0, 4.0, 6.0}, 10);
    CHECK(rep.threshold == doctest::Approx(oracles::strip_threshold(1.0)));
    REQUIRE(rep.records.size() == 3);
    CHECK(rep.counts_nondecreasing);
    CHECK(rep.second_eigenvalue_decreasing);
    for (const auto& rec : rep.records)
        CHECK(rec.E1_extrapolated > rep.threshold - 0.2);
    CHECK_THROWS_AS(essential_spectrum_probe(base, SigmaProfile::constant(0.0),
                                             {3.0, 4.0}, 10),
                    DegenerateDomain);
}

TEST_CASE("coupling threshold bisection") {
    DomainSpec spec{1.0, 6.0, 0.125, TruncationBc::Dirichlet};
    auto res = gamma_threshold_search(spec, -50.0, 0.0, 2.0);
    CHECK(res.bracket_hi - res.bracket_lo <= 2.0);
    CHECK(res.gamma_star < 0.0);
    CHECK(res.gamma_star > -50.0);
    CHECK(res.bisection_steps > 0);

    CHECK_THROWS_AS(gamma_threshold_search(spec, -0.01, 0.0, 0.005),
                    BracketInvalid);
}

TEST_CASE("L-shape solve lands near the known spectral factor") {
    auto res = lshape_direct_solve(std::sqrt(2.0), 8, 2, 6);
    REQUIRE(res.levels_E0.size() == 2);
    CHECK(res.levels_E0[1] < res.levels_E0[0]); // Dirichlet upper bounds
    CHECK(res.factor > 0.85);
    CHECK(res.factor < 1.0);
    CHECK_THROWS_AS(lshape_direct_solve(std::sqrt(2.0), 8, 1),
                    DegenerateDomain);
}

TEST_CASE("extrapolation helpers") {
    CHECK(richardson(4.0 + 0.1, 4.0 + 0.025) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(richardson(8.0 + 0.1, 8.0 + 0.05, 1.0) ==
          doctest::Approx(8.0).epsilon(1e-12));
    CHECK(observed_order(1.0, 0.25, 0.0625) == doctest::Approx(2.0).epsilon(1e-9));
    // Errors alternating in sign give no usable ratio.
    CHECK(std::isnan(observed_order(1.0, 2.0, 1.5)));
}
