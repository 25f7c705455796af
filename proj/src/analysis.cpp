#include "bandspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bandspec {

const char* to_string(BoundStateVerdict::Exists e) {
    switch (e) {
    case BoundStateVerdict::Exists::Yes: return "Yes";
    case BoundStateVerdict::Exists::No: return "No";
    case BoundStateVerdict::Exists::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double richardson(double coarse, double fine, double p) {
    return fine + (fine - coarse) / (std::pow(2.0, p) - 1.0);
}

double observed_order(double e_h, double e_h2, double e_h4) {
    double num = e_h - e_h2;
    double den = e_h2 - e_h4;
    if (den == 0.0 || num / den <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return std::log2(num / den);
}

SolveOutput solve_spectrum(const DomainSpec& spec, const SigmaProfile& profile,
                           int k, const SolverOptions& opts) {
    spec.validate();
    Mesh mesh = build_mesh(spec);
    DofMap dofmap = build_dofmap(mesh, spec.truncation_bc);
    DiscreteForm form = assemble(mesh, profile, dofmap);

    SolveOutput out;
    out.spec = spec;
    out.n_vertices = static_cast<int>(mesh.num_vertices());
    out.n_triangles = static_cast<int>(mesh.num_triangles());
    out.n_free = form.n;
    out.result = smallest_eigenpairs(form, k, opts);
    return out;
}

double localization_measure(const Mesh& mesh, const DofMap& dofmap,
                            const CsrMatrix& M, const std::vector<double>& u,
                            double R) {
    double inside = 0.0, total = 0.0;
    for (int dof = 0; dof < dofmap.n_free(); ++dof) {
        double lumped = 0.0;
        for (int k = M.row_ptr[dof]; k < M.row_ptr[dof + 1]; ++k)
            lumped += M.val[k];
        double mass = u[dof] * u[dof] * lumped;
        total += mass;
        int v = dofmap.dof_to_vertex[dof];
        if (mesh.x[v] + mesh.y[v] <= R)
            inside += mass;
    }
    return total > 0.0 ? inside / total : 0.0;
}

namespace {

struct GroundSolve {
    double E0 = 0.0;
    double localization = 0.0; // only when requested
};

GroundSolve ground_state(const DomainSpec& spec, const SigmaProfile& profile,
                         const SolverOptions& base, bool want_localization,
                         double R) {
    Mesh mesh = build_mesh(spec);
    DofMap dofmap = build_dofmap(mesh, spec.truncation_bc);
    DiscreteForm form = assemble(mesh, profile, dofmap);
    SolverOptions opts = base;
    opts.keep_eigenvectors = want_localization;
    SpectralResult r = smallest_eigenpairs(form, 1, opts);
    GroundSolve g;
    g.E0 = r.eigenvalues[0];
    if (want_localization)
        g.localization =
            localization_measure(mesh, dofmap, form.M, r.eigenvectors[0], R);
    return g;
}

} // namespace

BoundStateVerdict detect_bound_state(const DomainSpec& spec,
                                     const SigmaProfile& profile,
                                     const DetectOptions& opts) {
    spec.validate();
    const double thr = oracles::strip_threshold(spec.d);
    const double R = opts.localization_radius_factor * spec.d;

    DomainSpec sL = spec;
    DomainSpec sL2 = spec;
    sL2.L = 2.0 * spec.L;

    double e_h_L = ground_state(sL, profile, opts.solver, false, R).E0;
    double e_h2_L = ground_state(sL.refined(), profile, opts.solver, false, R).E0;
    double e_h_L2 = ground_state(sL2, profile, opts.solver, false, R).E0;
    GroundSolve fine = ground_state(sL2.refined(), profile, opts.solver, true, R);
    double e_h2_L2 = fine.E0;

    BoundStateVerdict v;
    v.raw_E0 = {e_h_L, e_h2_L, e_h_L2, e_h2_L2};
    double ex_L = richardson(e_h_L, e_h2_L);
    double ex_L2 = richardson(e_h_L2, e_h2_L2);
    v.E0_extrapolated = ex_L2;
    v.gap_to_threshold = thr - ex_L2;
    v.truncation_drift = std::abs(ex_L - ex_L2) / std::abs(ex_L);
    v.localization = fine.localization;

    double disc_err = std::abs(e_h_L2 - e_h2_L2) / 3.0;
    v.margin = 10.0 * disc_err +
               opts.solver.tol * std::max(std::abs(ex_L2), thr);

    bool order_ok = true;
    if (opts.estimate_order) {
        double e_h4_L = ground_state(sL.refined().refined(), profile,
                                     opts.solver, false, R).E0;
        double p = observed_order(e_h_L, e_h2_L, e_h4_L);
        v.observed_order = p;
        order_ok = std::isfinite(p) && p >= 1.7 && p <= 2.3;
    }

    if (ex_L2 < thr - v.margin && v.truncation_drift < 1e-4 &&
        v.localization > 0.5 && order_ok) {
        v.exists = BoundStateVerdict::Exists::Yes;
    } else if (ex_L >= thr - v.margin && ex_L2 >= thr - v.margin &&
               v.localization < 0.5) {
        v.exists = BoundStateVerdict::Exists::No;
    } else {
        v.exists = BoundStateVerdict::Exists::Inconclusive;
    }
    return v;
}

ConvergenceReport convergence_study(const DomainSpec& spec,
                                    const SigmaProfile& profile, int levels,
                                    int k, const SolverOptions& opts) {
    if (levels < 2)
        throw DegenerateDomain("convergence_study needs >= 2 levels");
    ConvergenceReport rep;
    DomainSpec s = spec;
    SolverOptions so = opts;
    so.keep_eigenvectors = false;
    for (int l = 0; l < levels; ++l) {
        SolveOutput out = solve_spectrum(s, profile, k, so);
        rep.records.push_back({s.h, s.L, out.result.eigenvalues});
        s = s.refined();
    }
    auto e0 = [&](int l) { return rep.records[l].eigenvalues[0]; };
    rep.extrapolated_E0 = richardson(e0(levels - 2), e0(levels - 1));
    if (levels >= 3)
        rep.observed_order =
            observed_order(e0(levels - 3), e0(levels - 2), e0(levels - 1));
    return rep;
}

EssentialProbeReport essential_spectrum_probe(const DomainSpec& base,
                                              const SigmaProfile& profile,
                                              const std::vector<double>& Ls,
                                              int k,
                                              const SolverOptions& opts) {
    if (Ls.size() < 3)
        throw DegenerateDomain("essential_spectrum_probe needs >= 3 values of L");
    EssentialProbeReport rep;
    rep.threshold = oracles::strip_threshold(base.d);
    rep.window_top = rep.threshold * 1.25;

    SolverOptions so = opts;
    so.keep_eigenvectors = false;
    for (double L : Ls) {
        DomainSpec s = base;
        s.L = L;
        int kk = k;
        std::vector<double> extrap;
        for (;;) {
            SolverOptions sk = so;
            sk.max_subspace = std::max(6 * kk + 60, 100);
            SolveOutput coarse = solve_spectrum(s, profile, kk, sk);
            SolveOutput finer = solve_spectrum(s.refined(), profile, kk, sk);
            extrap.resize(kk);
            for (int j = 0; j < kk; ++j)
                extrap[j] = richardson(coarse.result.eigenvalues[j],
                                       finer.result.eigenvalues[j]);
            if (extrap.back() > rep.window_top * 1.02 || kk >= 60)
                break;
            kk += 8;
        }
        EssentialProbeRecord rec;
        rec.L = L;
        rec.eigenvalues = extrap;
        rec.E1_extrapolated = extrap[1];
        for (double e : extrap)
            if (e >= rep.threshold && e <= rep.window_top)
                ++rec.count_in_window;
        rep.records.push_back(std::move(rec));
    }

    rep.counts_nondecreasing = true;
    rep.second_eigenvalue_decreasing = true;
    for (std::size_t i = 1; i < rep.records.size(); ++i) {
        if (rep.records[i].count_in_window < rep.records[i - 1].count_in_window)
            rep.counts_nondecreasing = false;
        if (rep.records[i].E1_extrapolated >
            rep.records[i - 1].E1_extrapolated + 1e-12)
            rep.second_eigenvalue_decreasing = false;
    }
    return rep;
}

std::vector<SweepRow> sigma_sweep(const DomainSpec& spec,
                                  const std::vector<double>& sigmas, int k,
                                  const DetectOptions& opts) {
    spec.validate();
    Mesh mesh = build_mesh(spec);
    DofMap dofmap = build_dofmap(mesh, spec.truncation_bc);

    std::vector<SweepRow> rows;
    for (double s : sigmas) {
        SigmaProfile p = SigmaProfile::constant(s);
        DiscreteForm form = assemble(mesh, p, dofmap);
        SolverOptions so = opts.solver;
        so.keep_eigenvectors = false;
        SpectralResult r = smallest_eigenpairs(form, k, so);

        SweepRow row;
        row.sigma = s;
        row.eigenvalues = r.eigenvalues;
        row.E0 = r.eigenvalues[0];
        row.verdict = detect_bound_state(spec, p, opts).exists;
        rows.push_back(std::move(row));
    }
    return rows;
}

GammaThresholdResult gamma_threshold_search(const DomainSpec& spec,
                                            double gamma_lo, double gamma_hi,
                                            double tol,
                                            const DetectOptions& opts) {
    spec.validate();
    if (tol <= 0.0)
        tol = 0.05 / spec.d;
    if (!(gamma_lo < gamma_hi))
        throw BracketInvalid("need gamma_lo < gamma_hi");

    auto verdict = [&](double g) {
        return detect_bound_state(spec, SigmaProfile::constant(g), opts).exists;
    };

    GammaThresholdResult res;
    res.bracket_lo = gamma_lo;
    res.bracket_hi = gamma_hi;
    res.verdict_lo = verdict(gamma_lo);
    res.verdict_hi = verdict(gamma_hi);
    if (res.verdict_hi != BoundStateVerdict::Exists::Yes ||
        res.verdict_lo != BoundStateVerdict::Exists::No)
        throw BracketInvalid(
            "bracket verdicts must be Yes at gamma_hi and No at gamma_lo (got " +
            std::string(to_string(res.verdict_hi)) + " / " +
            std::string(to_string(res.verdict_lo)) + ")");

    double lo = gamma_lo, hi = gamma_hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (verdict(mid) == BoundStateVerdict::Exists::Yes)
            hi = mid;
        else
            lo = mid;
        ++res.bisection_steps;
    }
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.gamma_star = 0.5 * (lo + hi);
    return res;
}

double rectangle_fem_E0(double d, double w, double h,
                        const SolverOptions& opts) {
    double s2 = std::numbers::sqrt2;
    int ny = static_cast<int>(std::round(d / h));
    int nx = static_cast<int>(std::round(w / h));
    Mesh mesh = build_rectangle_mesh(s2 * w, s2 * d, nx, ny);
    DofMap dofmap = build_dofmap(mesh, TruncationBc::Dirichlet);
    DiscreteForm form = assemble(mesh, SigmaProfile::constant(0.0), dofmap);
    SolverOptions so = opts;
    so.keep_eigenvectors = false;
    return smallest_eigenpairs(form, 1, so).eigenvalues[0];
}

LShapeResult lshape_direct_solve(double b, int mb, int levels, int arm_factor,
                                 const SolverOptions& opts) {
    if (levels < 2)
        throw DegenerateDomain("lshape_direct_solve needs >= 2 levels");
    LShapeResult res;
    res.b = b;
    SolverOptions so = opts;
    so.keep_eigenvectors = false;
    for (int l = 0; l < levels; ++l) {
        int m = mb << l;
        Mesh mesh = build_lshape_mesh(b, m, arm_factor * m);
        DofMap dofmap = build_dofmap(mesh, TruncationBc::Dirichlet);
        DiscreteForm form = assemble(mesh, SigmaProfile::constant(0.0), dofmap);
        res.levels_E0.push_back(smallest_eigenpairs(form, 1, so).eigenvalues[0]);
    }
    double p = 2.0;
    if (levels >= 3) {
        double q = observed_order(res.levels_E0[levels - 3],
                                  res.levels_E0[levels - 2],
                                  res.levels_E0[levels - 1]);
        res.observed_order = q;
        // Reentrant corner: the rate is between first and second order.
        if (std::isfinite(q)) p = std::clamp(q, 1.0, 3.0);
    }
    res.extrapolated_E0 =
        richardson(res.levels_E0[levels - 2], res.levels_E0[levels - 1], p);
    double pi = std::numbers::pi;
    res.factor = res.extrapolated_E0 * (b / pi) * (b / pi);
    return res;
}

} // namespace bandspec
