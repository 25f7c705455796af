#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bandspec/eigensolver.hpp"
#include "bandspec/geometry.hpp"
#include "bandspec/oracles.hpp"
#include "bandspec/sigma.hpp"

namespace bandspec {

struct SolveOutput {
    DomainSpec spec;
    int n_vertices = 0;
    int n_triangles = 0;
    int n_free = 0;
    SpectralResult result;
};

// End-to-end solve: mesh -> dofmap -> assembly -> eigensolver.
SolveOutput solve_spectrum(const DomainSpec& spec, const SigmaProfile& profile,
                           int k, const SolverOptions& opts = {});

// Fraction of M-weighted eigenvector mass on vertices with x + y <= R
// (lumped element masses). `u` is indexed by free DOF.
double localization_measure(const Mesh& mesh, const DofMap& dofmap,
                            const CsrMatrix& M, const std::vector<double>& u,
                            double R);

struct BoundStateVerdict {
    enum class Exists { Yes, No, Inconclusive };
    Exists exists = Exists::Inconclusive;
    double E0_extrapolated = 0.0;
    double gap_to_threshold = 0.0; // threshold - E0
    double localization = 0.0;
    double truncation_drift = 0.0;
    double margin = 0.0;
    std::optional<double> observed_order;
    std::vector<double> raw_E0; // per (h-level, L-level) solve
};

const char* to_string(BoundStateVerdict::Exists e);

struct DetectOptions {
    SolverOptions solver;
    double localization_radius_factor = 4.0; // R = factor * d
    bool estimate_order = false;             // adds one solve at h/4
};

// Verdict from solves at (h, h/2) x (L, 2L) with Richardson extrapolation
// in h assuming order 2; certification margin is 10x the estimated
// discretization error plus the solver tolerance.
BoundStateVerdict detect_bound_state(const DomainSpec& spec,
                                     const SigmaProfile& profile,
                                     const DetectOptions& opts = {});

struct ConvergenceRecord {
    double h = 0.0;
    double L = 0.0;
    std::vector<double> eigenvalues;
};

struct ConvergenceReport {
    std::vector<ConvergenceRecord> records; // successive h halvings
    double extrapolated_E0 = 0.0;
    std::optional<double> observed_order; // needs >= 3 levels
    std::optional<double> oracle_value;
};

// Solves at h, h/2, ..., (levels values) and Richardson-extrapolates E0.
ConvergenceReport convergence_study(const DomainSpec& spec,
                                    const SigmaProfile& profile, int levels,
                                    int k = 1, const SolverOptions& opts = {});

struct EssentialProbeRecord {
    double L = 0.0;
    double E1_extrapolated = 0.0;
    int count_in_window = 0;
    std::vector<double> eigenvalues;
};

struct EssentialProbeReport {
    double threshold = 0.0;
    double window_top = 0.0; // threshold * 5/4
    std::vector<EssentialProbeRecord> records;
    bool counts_nondecreasing = false;
    bool second_eigenvalue_decreasing = false;
};

// Truncation study over a growing-L sequence (>= 3 values): eigenvalue
// counts in [threshold, 5/4 threshold] and the approach of the second
// eigenvalue to the threshold. E1 is Richardson-extrapolated over (h, h/2).
EssentialProbeReport essential_spectrum_probe(const DomainSpec& base,
                                              const SigmaProfile& profile,
                                              const std::vector<double>& Ls,
                                              int k = 16,
                                              const SolverOptions& opts = {});

struct SweepRow {
    double sigma = 0.0;
    double E0 = 0.0;
    std::vector<double> eigenvalues; // lowest few at the fixed mesh
    BoundStateVerdict::Exists verdict = BoundStateVerdict::Exists::Inconclusive;
};

// Constant-sigma sweep at a fixed mesh plus a detect_bound_state verdict
// per value. Rows keep the caller's parameter order.
std::vector<SweepRow> sigma_sweep(const DomainSpec& spec,
                                  const std::vector<double>& sigmas, int k = 3,
                                  const DetectOptions& opts = {});

struct GammaThresholdResult {
    double gamma_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    BoundStateVerdict::Exists verdict_lo = BoundStateVerdict::Exists::No;
    BoundStateVerdict::Exists verdict_hi = BoundStateVerdict::Exists::Yes;
    int bisection_steps = 0;
};

// Bisection on constant sigma = gamma between a Yes verdict at gamma_hi and
// a No verdict at gamma_lo, to bracket width tol (default 0.05/d).
// Throws BracketInvalid.
GammaThresholdResult gamma_threshold_search(const DomainSpec& spec,
                                            double gamma_lo, double gamma_hi,
                                            double tol = 0.0,
                                            const DetectOptions& opts = {});

struct LShapeResult {
    double b = 0.0;
    std::vector<double> levels_E0; // per h level
    double extrapolated_E0 = 0.0;
    double factor = 0.0; // E0 * (b/pi)^2
    std::optional<double> observed_order;
};

// Direct Dirichlet solve on the truncated L-shape of arm width b; pitch
// b/mb refined `levels` times, arm length arm_factor*b.
LShapeResult lshape_direct_solve(double b, int mb, int levels,
                                 int arm_factor = 8,
                                 const SolverOptions& opts = {});

// Ground state of the all-Dirichlet band rectangle of diagonal width d and
// length w (sides sqrt(2)d by sqrt(2)w), FEM pitch sqrt(2)h. Reference
// value: rect_ground_state(d, w).
double rectangle_fem_E0(double d, double w, double h,
                        const SolverOptions& opts = {});

// Two-level Richardson extrapolation assuming order p.
double richardson(double coarse, double fine, double p = 2.0);
// Observed order from three successive halvings.
double observed_order(double e_h, double e_h2, double e_h4);

} // namespace bandspec
