// Hot-path microbenchmarks: tensor stepping, influence tables, row synthesis.

#include <benchmark/benchmark.h>

#include "qdemit/correlators.hpp"
#include "qdemit/engine.hpp"
#include "qdemit/pme.hpp"

namespace {

using namespace qdemit;

RunConfig bench_cfg(double lambda) {
  RunConfig cfg;
  cfg.bath.lambda = lambda;
  cfg.bath.temperature_K = 4.0;
  cfg.pulses.period_ps = 400.0;
  return cfg;
}

// one saturated augmented-tensor step at the working memory depth
void BM_adm_step(benchmark::State& state) {
  const RunConfig cfg = bench_cfg(1.0);
  PathEngine eng(cfg);
  const AdmPropagator prop(eng.weights(), eng.n_c_eff(), 4e9);
  AdmTensor a = AdmTensor::from_state(Vec4(cplx(1.0), cplx(0.0), cplx(0.0), cplx(0.0)));
  const int mid = eng.windows().front().first + 2;
  for (int k = 0; k < eng.n_c_eff(); ++k) prop.step(a, eng.step_matrix(k));
  for (auto _ : state) {
    prop.step(a, eng.step_matrix(mid));
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(a.size()));
}
BENCHMARK(BM_adm_step);

// full influence table for the desk grid
void BM_eta_table(benchmark::State& state) {
  const RunConfig cfg = bench_cfg(1.0);
  const BathTables tables(cfg.bath, cfg.engine.quad_nodes);
  for (auto _ : state) {
    const EtaTable eta = compute_eta_table(tables, cfg.grid.dt_ps, cfg.grid.n_c);
    benchmark::DoNotOptimize(eta.diag);
  }
}
BENCHMARK(BM_eta_table);

// one correlation column from the memory kernel at a drive-free node
void BM_column_synthesis(benchmark::State& state) {
  const RunConfig cfg = bench_cfg(1.0);
  PathEngine eng(cfg);
  eng.t_line();
  const int ntau = tau_points(cfg);
  const std::vector<cplx> kern = eng.kernel("exact", ntau);
  const int node = emission_nodes(cfg).front();
  for (auto _ : state) {
    PathEngine::ColumnPair cp = eng.kernel_column(node, ntau, "exact", kern);
    benchmark::DoNotOptimize(cp.g1.data());
  }
  state.SetItemsProcessed(state.iterations() * ntau);
}
BENCHMARK(BM_column_synthesis);

// dressed master-equation map for one window step
void BM_pme_step_map(benchmark::State& state) {
  const RunConfig cfg = bench_cfg(1.0);
  PmeEngine pme(cfg);
  const int k = 52;  // inside the first pulse window
  for (auto _ : state) {
    const Mat4 m = pme.step_map(k);
    benchmark::DoNotOptimize(m(0, 0));
  }
}
BENCHMARK(BM_pme_step_map);

// analytic memory kernel over a full emission row
void BM_kernel_eval(benchmark::State& state) {
  const RunConfig cfg = bench_cfg(1.0);
  PathEngine eng(cfg);
  const int ntau = tau_points(cfg);
  for (auto _ : state) {
    const std::vector<cplx> kern = eng.kernel("exact", ntau);
    benchmark::DoNotOptimize(kern.data());
  }
  state.SetItemsProcessed(state.iterations() * ntau);
}
BENCHMARK(BM_kernel_eval);

}  // namespace

BENCHMARK_MAIN();
