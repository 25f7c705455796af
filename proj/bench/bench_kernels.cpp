#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <random>
#include <vector>

#include "bandspec/analysis.hpp"
#include "bandspec/assembly.hpp"

using namespace bandspec;

namespace {

struct Problem {
    Mesh mesh;
    DofMap dofmap;
    DiscreteForm form;
    std::vector<double> x, y;
};

const Problem& problem() {
    static const Problem p = [] {
        DomainSpec spec{1.0, 16.0, 1.0 / 32, TruncationBc::Dirichlet};
        Problem q;
        q.mesh = build_mesh(spec);
        q.dofmap = build_dofmap(q.mesh, spec.truncation_bc);
        q.form = assemble(q.mesh, SigmaProfile::constant(1.0), q.dofmap);
        q.x.resize(q.form.n);
        q.y.resize(q.form.n);
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (auto& v : q.x) v = dist(rng);
        return q;
    }();
    return p;
}

void bm_spmv_serial(benchmark::State& state) {
    auto& p = const_cast<Problem&>(problem());
    for (auto _ : state) {
        spmv_serial(p.form.K, p.x.data(), p.y.data());
        benchmark::DoNotOptimize(p.y.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(p.form.K.nnz()));
}
BENCHMARK(bm_spmv_serial);

void bm_spmv_parallel(benchmark::State& state) {
    auto& p = const_cast<Problem&>(problem());
    for (auto _ : state) {
        spmv_parallel(p.form.K, p.x.data(), p.y.data());
        benchmark::DoNotOptimize(p.y.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(p.form.K.nnz()));
}
BENCHMARK(bm_spmv_parallel);

void bm_assemble(benchmark::State& state) {
#ifdef _OPENMP
    int prev = omp_get_max_threads();
    int want = static_cast<int>(state.range(0));
    omp_set_num_threads(want > 0 ? want : prev);
#endif
    const auto& p = problem();
    SigmaProfile sigma = SigmaProfile::constant(1.0);
    for (auto _ : state) {
        DiscreteForm form = assemble(p.mesh, sigma, p.dofmap);
        benchmark::DoNotOptimize(form.K.val.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(p.mesh.num_triangles()));
#ifdef _OPENMP
    omp_set_num_threads(prev);
#endif
}
// Arg is the OpenMP thread count; 0 means "all available".
BENCHMARK(bm_assemble)->Arg(1)->Arg(0)->Name("bm_assemble_threads");

} // namespace

BENCHMARK_MAIN();
