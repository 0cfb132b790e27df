#include <benchmark/benchmark.h>

#include "mrdcf/fairness.hpp"
#include "mrdcf/scenario_io.hpp"
#include "mrdcf/sim.hpp"

using namespace mrdcf;

namespace {

Scenario n_station_scenario(int n) {
    static const double rates[] = {1e6, 2e6, 5.5e6, 11e6};
    Scenario sc;
    for (int i = 0; i < n; ++i) {
        StationConfig st;
        st.id = i + 1;
        st.lambda_pps = 200.0 + 100.0 * i;
        st.bit_rate_bps = rates[i % 4];
        sc.stations.push_back(st);
    }
    return sc;
}

void bm_expected_slot(benchmark::State& state) {
    const auto sc = n_station_scenario(static_cast<int>(state.range(0)));
    const auto part = derive_classes(sc);
    TauVector tau(sc.size(), 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(expected_slot(tau, sc, part));
    }
}
BENCHMARK(bm_expected_slot)->Arg(3)->Arg(10)->Arg(25);

void bm_solve_equilibrium(benchmark::State& state) {
    const auto sc = n_station_scenario(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_equilibrium(sc));
    }
}
BENCHMARK(bm_solve_equilibrium)->Arg(3)->Arg(10);

void bm_station_chain_solve(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_station_chain(32, 5, 0.1, 0.5, 0.3));
    }
}
BENCHMARK(bm_station_chain_solve);

void bm_optimize_mlpf(benchmark::State& state) {
    const auto sc = builtin_scenario_a();
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize(sc, Criterion::mlpf));
    }
}
BENCHMARK(bm_optimize_mlpf)->Unit(benchmark::kMillisecond);

void bm_sim_second(benchmark::State& state) {
    SimConfig cfg;
    cfg.scenario = builtin_scenario_a();
    cfg.duration = 1.0;
    cfg.warmup = 0.0;
    cfg.seed = 7;
    for (auto _ : state) {
        cfg.seed += 1;
        benchmark::DoNotOptimize(run_sim(cfg));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_sim_second)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
