#include <benchmark/benchmark.h>

#include <vector>

#include "ptcure/ptcure.hpp"

using namespace ptcure;

namespace {

const ModelParams kParams(0.871, WeibullParams(1.157, 18.762));

std::vector<Observation> dataset(int n) {
    const SimulationSpec spec{kParams, n, 24.0, 12345};
    return simulate_portfolio(spec).observations();
}

void BM_LogLikelihood(benchmark::State& state) {
    const auto data = dataset(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(log_likelihood(kParams, data));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikelihood)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_LogLikelihoodGradient(benchmark::State& state) {
    const auto data = dataset(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(log_likelihood_gradient(kParams, data));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikelihoodGradient)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_FitMle(benchmark::State& state) {
    const auto data = dataset(static_cast<int>(state.range(0)));
    FitOptions opts;
    opts.multistart_count = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_mle(data, opts));
}
BENCHMARK(BM_FitMle)->Args({20000, 1})->Args({20000, 5})->Unit(benchmark::kMillisecond);

void BM_SimulatePortfolio(benchmark::State& state) {
    const SimulationSpec spec{kParams, static_cast<int>(state.range(0)), 24.0, 8};
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_portfolio(spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePortfolio)->Arg(10000)->Arg(100000);

void BM_KaplanMeier(benchmark::State& state) {
    const auto data = dataset(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kaplan_meier(data));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KaplanMeier)->Arg(10000)->Arg(100000);

void BM_PopulationSurvival(benchmark::State& state) {
    double t = 0.0;
    for (auto _ : state) {
        t += 0.001;
        if (t > 24.0)
            t = 0.001;
        benchmark::DoNotOptimize(population_survival(t, kParams));
    }
}
BENCHMARK(BM_PopulationSurvival);

} // namespace

BENCHMARK_MAIN();
