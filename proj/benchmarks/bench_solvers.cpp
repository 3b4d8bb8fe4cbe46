#include <benchmark/benchmark.h>

#include "scipi/scipi.hpp"

namespace {

using namespace scipi;

void BM_SciPiQuadratic(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const auto problem = make_quadratic(gen_spectrum_matrix(1, d, leading_spectrum(d, 1.0, 0.9)));
  const Vector x0 = Rng(2).unit_sphere(d);
  SolverConfig config;
  config.max_iter = 100;
  config.x_tol = 0.0;
  config.iterate_cap = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sci_pi(problem, x0, config).final_x);
  state.SetItemsProcessed(state.iterations() * config.max_iter);
}
BENCHMARK(BM_SciPiQuadratic)->Arg(50)->Arg(200);

void BM_SciPiMixture(benchmark::State& state) {
  const auto problem = make_mixture(gen_mixture_design(1, state.range(0), 10));
  const Vector x0 = Rng(2).unit_sphere(10);
  SolverConfig config;
  config.max_iter = 100;
  config.x_tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(sci_pi(problem, x0, config).final_x);
  state.SetItemsProcessed(state.iterations() * config.max_iter);
}
BENCHMARK(BM_SciPiMixture)->Arg(200)->Arg(2000);

void BM_NmfOuterIteration(benchmark::State& state) {
  const LowRankNonneg lr = gen_lowrank_nonneg(0, 30, 20, 4);
  const NmfInit init = nmf_initialize(lr.V, 4, 0);
  const auto method = static_cast<NmfMethod>(state.range(0));
  NmfOptions options;
  options.max_iter = 50;
  for (auto _ : state) benchmark::DoNotOptimize(nmf_solve(lr.V, 4, method, init, options).W);
  state.SetLabel(to_string(method));
}
BENCHMARK(BM_NmfOuterIteration)->DenseRange(0, 2);

void BM_Ica(benchmark::State& state) {
  const IcaData data = gen_ica_data(0, 2000, 4);
  const Vector x0 = Rng(1).unit_sphere(4);
  const bool sci = state.range(0) == 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sci ? ica_sci_pi(data.W, x0).final_x : fast_ica(data.W, x0).final_x);
  }
  state.SetLabel(sci ? "sci-pi" : "fastica");
}
BENCHMARK(BM_Ica)->Arg(0)->Arg(1);

void BM_SymEig(benchmark::State& state) {
  Rng rng(3);
  const Matrix G = rng.normal_matrix(state.range(0), state.range(0));
  const Matrix A = (G + G.transpose()) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(A).eigenvalues);
}
BENCHMARK(BM_SymEig)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
