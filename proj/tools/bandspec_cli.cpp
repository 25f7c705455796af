#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bandspec/analysis.hpp"

using nlohmann::json;
using namespace bandspec;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string subcommand;
    double d = 1.0;
    double h = 0.125;
    double L = 4.0;
    std::string truncation = "dirichlet";
    double sigma = 0.0;
    std::string sigma_file;
    int k = 5;
    double tol = 1e-8;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 12345;

    // subcommand-specific
    std::vector<double> sigma_grid;
    std::vector<double> bracket{-100.0, 0.0};
    double bisect_tol = 0.0;
    int levels = 3;
    std::vector<double> L_list{4.0, 8.0, 16.0};
    std::string oracle_name;
    double w = 2.0;
    double gamma = -1.0;
    double b = std::numbers::sqrt2;
    int n_grid = 400;
    int eigenfunction_index = 0;
};

json config_to_json(const RunConfig& c) {
    json j;
    j["subcommand"] = c.subcommand;
    j["d"] = c.d;
    j["h"] = c.h;
    j["L"] = c.L;
    j["truncation"] = c.truncation;
    if (c.sigma_file.empty())
        j["sigma"] = c.sigma;
    else
        j["sigma_file"] = c.sigma_file;
    j["k"] = c.k;
    j["tol"] = c.tol;
    j["format"] = c.format;
    j["seed"] = c.seed;
    if (!c.out.empty()) j["out"] = c.out;
    j["version"] = kVersion;
    return j;
}

void atomic_write(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        os << payload;
        if (!os)
            throw ParseError("cannot write output file: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

DomainSpec make_spec(const RunConfig& c) {
    DomainSpec s;
    s.d = c.d;
    s.h = c.h;
    s.L = c.L;
    s.truncation_bc = c.truncation == "neumann" ? TruncationBc::Neumann
                                                : TruncationBc::Dirichlet;
    return s;
}

SigmaProfile make_profile(const RunConfig& c) {
    if (!c.sigma_file.empty())
        return load_profile(c.sigma_file, c.d);
    return SigmaProfile::constant(c.sigma);
}

SolverOptions make_solver(const RunConfig& c) {
    SolverOptions so;
    so.tol = c.tol;
    so.seed = c.seed;
    return so;
}

json verdict_to_json(const BoundStateVerdict& v) {
    json j;
    j["exists"] = to_string(v.exists);
    j["E0_extrapolated"] = v.E0_extrapolated;
    j["gap_to_threshold"] = v.gap_to_threshold;
    j["localization"] = v.localization;
    j["truncation_drift"] = v.truncation_drift;
    j["margin"] = v.margin;
    if (v.observed_order) j["observed_order"] = *v.observed_order;
    j["raw_E0"] = v.raw_E0;
    return j;
}

int run_solve(const RunConfig& c) {
    SolveOutput out = solve_spectrum(make_spec(c), make_profile(c), c.k,
                                     make_solver(c));
    if (c.format == "csv") {
        std::ostringstream os;
        os << "index,eigenvalue,residual\n";
        for (std::size_t i = 0; i < out.result.eigenvalues.size(); ++i)
            os << i << "," << fmt17(out.result.eigenvalues[i]) << ","
               << fmt17(out.result.residuals[i]) << "\n";
        atomic_write(c.out, os.str());
        return 0;
    }
    json j;
    j["config"] = config_to_json(c);
    j["eigenvalues"] = out.result.eigenvalues;
    j["residuals"] = out.result.residuals;
    j["iterations"] = out.result.iterations;
    j["solver"] = out.result.solver;
    j["shift"] = out.result.shift;
    j["n_free"] = out.n_free;
    j["n_vertices"] = out.n_vertices;
    j["n_triangles"] = out.n_triangles;
    atomic_write(c.out, j.dump(2) + "\n");
    return 0;
}

int run_detect(const RunConfig& c) {
    DetectOptions o;
    o.solver = make_solver(c);
    BoundStateVerdict v = detect_bound_state(make_spec(c), make_profile(c), o);
    json j;
    j["config"] = config_to_json(c);
    j["verdict"] = verdict_to_json(v);
    j["threshold"] = oracles::strip_threshold(c.d);
    atomic_write(c.out, j.dump(2) + "\n");
    return 0;
}

int run_sweep(const RunConfig& c) {
    DetectOptions o;
    o.solver = make_solver(c);
    auto rows = sigma_sweep(make_spec(c), c.sigma_grid, std::max(c.k, 1), o);
    if (c.format == "csv") {
        std::ostringstream os;
        os << "sigma,E0,verdict\n";
        for (const auto& r : rows)
            os << fmt17(r.sigma) << "," << fmt17(r.E0) << ","
               << to_string(r.verdict) << "\n";
        atomic_write(c.out, os.str());
        return 0;
    }
    json j;
    j["config"] = config_to_json(c);
    json table = json::array();
    for (const auto& r : rows) {
        json row;
        row["sigma"] = r.sigma;
        row["E0"] = r.E0;
        row["eigenvalues"] = r.eigenvalues;
        row["verdict"] = to_string(r.verdict);
        table.push_back(row);
    }
    j["rows"] = table;
    atomic_write(c.out, j.dump(2) + "\n");
    return 0;
}

int run_threshold(const RunConfig& c) {
    DetectOptions o;
    o.solver = make_solver(c);
    auto res = gamma_threshold_search(make_spec(c), c.bracket[0], c.bracket[1],
                                      c.bisect_tol, o);
    json j;
    j["config"] = config_to_json(c);
    j["gamma_star"] = res.gamma_star;
    j["bracket_lo"] = res.bracket_lo;
    j["bracket_hi"] = res.bracket_hi;
    j["verdict_lo"] = to_string(res.verdict_lo);
    j["verdict_hi"] = to_string(res.verdict_hi);
    j["bisection_steps"] = res.bisection_steps;
    atomic_write(c.out, j.dump(2) + "\n");
    return 0;
}

int run_converge(const RunConfig& c) {
    auto rep = convergence_study(make_spec(c), make_profile(c), c.levels,
                                 std::max(c.k, 1), make_solver(c));
    if (c.format == "csv") {
        std::ostringstream os;
        os << "h,L,E0\n";
        for (const auto& r : rep.records)
            os << fmt17(r.h) << "," << fmt17(r.L) << ","
               << fmt17(r.eigenvalues[0]) << "\n";
        atomic_write(c.out, os.str());
        return 0;
    }
    json j;
    j["config"] = config_to_json(c);
    json recs = json::array();
    for (const auto& r : rep.records) {
        json rec;
        rec["h"] = r.h;
        rec["L"] = r.L;
        rec["eigenvalues"] = r.eigenvalues;
        recs.push_back(rec);
    }
    j["records"] = recs;
    j["extrapolated_E0"] = rep.extrapolated_E0;
    if (rep.observed_order) j["observed_order"] = *rep.observed_order;
    atomic_write(c.out, j.dump(2) + "\n");
    return 0;
}

int run_probe(const RunConfig& c) {
    auto rep = essential_spectrum_probe(make_spec(c), make_profile(c),
                                        c.L_list, std::max(c.k, 8),
                                        make_solver(c));
    json j;
    j["config"] = config_to_json(c);
    j["threshold"] = rep.threshold;
    j["window_top"] = rep.window_top;
    json recs = json::array();
    for (const auto& r : rep.records) {
        json rec;
        rec["L"] = r.L;
        rec["E1_extrapolated"] = r.E1_extrapolated;
        rec["count_in_window"] = r.count_in_window;
        rec["eigenvalues"] = r.eigenvalues;
        recs.push_back(rec);
    }
    j["records"] = recs;
    j["counts_nondecreasing"] = rep.counts_nondecreasing;
    j["second_eigenvalue_decreasing"] = rep.second_eigenvalue_decreasing;
    atomic_write(c.out, j.dump(2) + "\n");
    return 0;
}

int run_oracle(const RunConfig& c) {
    json j;
    j["config"] = config_to_json(c);
    j["name"] = c.oracle_name;
    std::string provenance = "ClosedForm";
    double value = 0.0;
    if (c.oracle_name == "strip-threshold") {
        value = oracles::strip_threshold(c.d);
    } else if (c.oracle_name == "rect-ground-state") {
        value = oracles::rect_ground_state(c.d, c.w);
    } else if (c.oracle_name == "robin-lambda0") {
        value = oracles::robin_interval_lambda0(c.gamma, c.d);
        provenance = "SecularRoot";
    } else if (c.oracle_name == "square-robin-ground-state") {
        value = oracles::square_robin_ground_state(c.gamma, c.d);
        provenance = "SecularRoot";
    } else if (c.oracle_name == "fdm-1d-robin") {
        value = oracles::fdm_1d_robin(c.gamma, c.d, c.n_grid);
        provenance = "FDM1D";
    } else if (c.oracle_name == "lshape-reference") {
        value = oracles::lshape_reference(c.b);
        provenance = "PaperConstant";
    } else {
        throw CLI::ValidationError("--name", "unknown oracle: " + c.oracle_name);
    }
    j["value"] = value;
    j["provenance"] = provenance;
    atomic_write(c.out, j.dump(2) + "\n");
    return 0;
}

int run_export(const RunConfig& c) {
    DomainSpec spec = make_spec(c);
    spec.validate();
    Mesh mesh = build_mesh(spec);
    DofMap dofmap = build_dofmap(mesh, spec.truncation_bc);
    DiscreteForm form = assemble(mesh, make_profile(c), dofmap);
    SpectralResult r = smallest_eigenpairs(
        form, std::max(c.k, c.eigenfunction_index + 1), make_solver(c));
    const auto& u = r.eigenvectors[c.eigenfunction_index];

    std::ostringstream os;
    os << "x,y,value\n";
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        int dof = dofmap.vertex_to_dof[v];
        double val = dof >= 0 ? u[dof] : 0.0;
        os << fmt17(mesh.x[v]) << "," << fmt17(mesh.y[v]) << "," << fmt17(val)
           << "\n";
    }
    atomic_write(c.out, os.str());
    return 0;
}

void add_common(CLI::App* cmd, RunConfig& c, bool with_sigma = true) {
    // The pitch option is spelled --h, so help is long-form only.
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--d", c.d, "molecule size d");
    cmd->add_option("--h", c.h, "mesh pitch (must divide d and L)");
    cmd->add_option("--L", c.L, "truncation length (domain keeps x+y <= 2L)");
    cmd->add_option("--truncation", c.truncation,
                    "artificial boundary condition on the cut")
        ->check(CLI::IsMember({"dirichlet", "neumann"}));
    if (with_sigma) {
        auto* s = cmd->add_option("--sigma", c.sigma,
                                  "constant boundary interaction strength");
        auto* f = cmd->add_option("--sigma-file", c.sigma_file,
                                  "two-column (y, sigma) profile file");
        s->excludes(f);
        f->excludes(s);
    }
    cmd->add_option("--k", c.k, "number of eigenpairs");
    cmd->add_option("--tol", c.tol, "eigensolver residual tolerance");
    cmd->add_option("--out", c.out, "output path (stdout when omitted)");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", c.seed, "starting-vector seed");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for the half-line molecule band domain"};
    app.set_help_flag("--help", "print this help message and exit");
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "key = value configuration file");
    app.require_subcommand(1);

    RunConfig c;

    auto* solve = app.add_subcommand("solve", "lowest-k eigenpairs");
    add_common(solve, c);

    auto* detect = app.add_subcommand("detect", "bound-state verdict");
    add_common(detect, c);

    auto* sweep = app.add_subcommand("sweep", "constant-sigma sweep");
    add_common(sweep, c);
    sweep->add_option("--sigma-grid", c.sigma_grid, "sigma values")->required();

    auto* threshold = app.add_subcommand("threshold",
                                         "repulsion-threshold bisection");
    add_common(threshold, c, false);
    threshold->add_option("--bracket", c.bracket, "gamma_lo gamma_hi")
        ->expected(2);
    threshold->add_option("--bisect-tol", c.bisect_tol,
                          "bracket width target (default 0.05/d)");

    auto* converge = app.add_subcommand("converge", "h-refinement study");
    add_common(converge, c);
    converge->add_option("--levels", c.levels, "number of h levels");

    auto* probe = app.add_subcommand("probe-essential",
                                     "essential-spectrum truncation study");
    add_common(probe, c);
    probe->add_option("--L-list", c.L_list, "growing L values (>= 3)");

    auto* oracle = app.add_subcommand("oracle", "closed-form reference values");
    oracle->add_option("--name", c.oracle_name, "oracle name")->required();
    oracle->add_option("--d", c.d, "molecule size d");
    oracle->add_option("--w", c.w, "rectangle length");
    oracle->add_option("--gamma", c.gamma, "Robin constant (<= 0)");
    oracle->add_option("--b", c.b, "L-shape arm width");
    oracle->add_option("--n", c.n_grid, "FDM grid points");
    oracle->add_option("--out", c.out, "output path");

    auto* expo = app.add_subcommand("export-eigenfunction",
                                    "eigenfunction as x,y,value CSV");
    add_common(expo, c);
    expo->add_option("--index", c.eigenfunction_index, "eigenpair index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (auto* cmd : {solve, detect, sweep, threshold, converge, probe, oracle, expo})
        if (cmd->parsed()) c.subcommand = cmd->get_name();

    try {
        if (solve->parsed()) return run_solve(c);
        if (detect->parsed()) return run_detect(c);
        if (sweep->parsed()) return run_sweep(c);
        if (threshold->parsed()) return run_threshold(c);
        if (converge->parsed()) return run_converge(c);
        if (probe->parsed()) return run_probe(c);
        if (oracle->parsed()) return run_oracle(c);
        if (expo->parsed()) return run_export(c);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const bandspec::Error& e) {
        json j;
        j["config"] = config_to_json(c);
        j["error"] = {{"code", e.code()}, {"message", e.what()}};
        std::cerr << j.dump(2) << "\n";
        return 1;
    }
    return 2;
}
