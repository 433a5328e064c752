#include "colide/bench.hpp"
#include "colide/metrics.hpp"
#include "colide/optimizer.hpp"
#include "colide/scores.hpp"

#include <benchmark/benchmark.h>

using namespace colide;

namespace {

SimulatedProblem problem(Index d) {
  ExperimentConfig cfg;
  cfg.graph.d = d;
  cfg.graph.k = 4;
  return simulate_problem(cfg, 0, 1000, 1.0);
}

Matrix small_weights(Index d) {
  StreamRng rng(7);
  Matrix w(d, d);
  const double bound = 0.8 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) w(i, j) = i == j ? 0.0 : bound * (2.0 * rng.uniform() - 1.0);
  return w;
}

void BM_LogDetFactor(benchmark::State& state) {
  const Index d = state.range(0);
  const Matrix w = small_weights(d);
  for (auto _ : state) {
    auto f = LogDetFactor::try_factor(w, 1.0);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_LogDetFactor)->Arg(20)->Arg(50)->Arg(100)->Arg(200);

void BM_GradHLdet(benchmark::State& state) {
  const Index d = state.range(0);
  const Matrix w = small_weights(d);
  const LogDetFactor f = LogDetFactor::factor(w, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(f.gradient(w));
}
BENCHMARK(BM_GradHLdet)->Arg(20)->Arg(50)->Arg(100)->Arg(200);

void BM_GradWNv(benchmark::State& state) {
  const Index d = state.range(0);
  const Matrix cov = sample_cov(problem(d).data);
  const Matrix w = small_weights(d);
  const Vector sigmas = Vector::Ones(d);
  for (auto _ : state) benchmark::DoNotOptimize(grad_w_nv(w, sigmas, cov));
}
BENCHMARK(BM_GradWNv)->Arg(20)->Arg(50)->Arg(100)->Arg(200);

// Fixed iteration budget so the timing is per-iteration cost, not convergence.
void BM_FitIterations(benchmark::State& state) {
  const Index d = state.range(0);
  const Method method = static_cast<Method>(state.range(1));
  const Dataset data = problem(d).data;
  const StageSchedule schedule({{1.0, 1.0, 1000}});
  FitOptions opts;
  opts.tol = 0.0;
  opts.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, method, schedule, kDefaultLambda, opts));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_FitIterations)
    ->ArgsProduct({{20, 50}, {static_cast<long>(Method::ColideEv), static_cast<long>(Method::ColideNv),
                              static_cast<long>(Method::LsBaseline)}})
    ->Unit(benchmark::kMillisecond);

void BM_Sid(benchmark::State& state) {
  const Index d = state.range(0);
  const WeightedDigraph truth = problem(d).truth;
  ExperimentConfig cfg;
  cfg.graph.d = d;
  cfg.graph.k = 4;
  const WeightedDigraph est = simulate_problem(cfg, 1, 10, 1.0).truth;
  for (auto _ : state) benchmark::DoNotOptimize(sid(est, truth, d));
}
BENCHMARK(BM_Sid)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
