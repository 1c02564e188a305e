#include <benchmark/benchmark.h>

#include <vector>

#include "bacs/lambda_solver.hpp"
#include "bacs/method.hpp"
#include "bacs/predictives.hpp"
#include "bacs/tilting.hpp"
#include "bacs/wealth.hpp"

using namespace bacs;

namespace {

std::vector<double> draws(const TrueLaw& law, std::size_t n, std::uint64_t seed = 1) {
  Rng rng(seed);
  return law.sample(rng, n);
}

void BM_SolveLambdaEmpirical(benchmark::State& state) {
  const auto h = draws(TrueLaw::beta(2, 5), static_cast<std::size_t>(state.range(0)));
  const auto q = empirical_predictive(h);
  double mu = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lambda(q, mu, 0.95));
    mu = mu > 0.85 ? 0.1 : mu + 0.01;
  }
}
BENCHMARK(BM_SolveLambdaEmpirical)->Arg(10)->Arg(100)->Arg(1000);

void BM_SolveLambdaBetaMixture(benchmark::State& state) {
  const std::vector<BetaComponent> comps{{2, 5, 0.3}, {0.5, 0.5, 0.2}, {10, 30, 0.5}};
  const auto q = PredictiveDistribution::from_betas(comps);
  double mu = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lambda(q, mu, 0.95));
    mu = mu > 0.85 ? 0.1 : mu + 0.01;
  }
}
BENCHMARK(BM_SolveLambdaBetaMixture);

void BM_TiltSolve(benchmark::State& state) {
  const auto h = draws(TrueLaw::beta(2, 2), static_cast<std::size_t>(state.range(0)));
  EtelConfig cfg;
  cfg.tau = 1.0;
  double mu = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(etel_tilt_solve(h, mu, cfg));
    mu = mu > 0.9 ? 0.05 : mu + 0.01;
  }
}
BENCHMARK(BM_TiltSolve)->Arg(10)->Arg(100)->Arg(1000);

void BM_EtelPredictive(benchmark::State& state) {
  const auto h = draws(TrueLaw::beta(2, 2), static_cast<std::size_t>(state.range(0)));
  EtelConfig cfg;
  cfg.tau = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(etel_predictive(h, cfg));
}
BENCHMARK(BM_EtelPredictive)->Args({50, 0})->Args({50, 1})->Args({500, 1});

void BM_ProcessObservation(benchmark::State& state) {
  const BettingConfig cfg{0.1, 0.95, static_cast<int>(state.range(0))};
  WealthLedger ledger(cfg.grid_size);
  std::vector<double> lambdas(ledger.grid.size(), 0.0);
  const auto xs = draws(TrueLaw::beta(2, 5), 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(process_observation(ledger, xs[i++ % xs.size()], lambdas, cfg));
  }
}
BENCHMARK(BM_ProcessObservation)->Arg(100)->Arg(500)->Arg(2000);

// One full confidence-sequence step per iteration, stream restarted every 200 steps.
void BM_CsStreamStep(benchmark::State& state) {
  MethodSpec spec;
  spec.method = static_cast<Method>(state.range(0));
  const BettingConfig cfg{0.1, 0.95, 100};
  const auto xs = draws(TrueLaw::beta(2, 5), 200);
  std::size_t i = 0;
  CsStream s(spec, cfg);
  for (auto _ : state) {
    if (i == xs.size()) {
      state.PauseTiming();
      s = CsStream(spec, cfg);
      i = 0;
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(s.push(xs[i++]));
  }
  state.SetLabel(std::string(to_string(spec.method)));
}
BENCHMARK(BM_CsStreamStep)->DenseRange(0, 4);

}  // namespace

BENCHMARK_MAIN();
