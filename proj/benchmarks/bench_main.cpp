#include "powerloop/evm.hpp"
#include "powerloop/fuzzy.hpp"
#include "powerloop/plant.hpp"
#include "powerloop/scenario.hpp"
#include "powerloop/sim.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace powerloop;

void bm_fuzzy_step(benchmark::State& state) {
    const FuzzyEngine engine = make_engine(FuzzyParams{});
    double e = -9.7;
    for (auto _ : state) {
        // Walk the universe so each iteration hits different rule cells.
        e += 0.37;
        if (e > 10.0) e -= 20.0;
        benchmark::DoNotOptimize(engine.step(e, 5.0 * e));
    }
}
BENCHMARK(bm_fuzzy_step);

void bm_defuzzify(benchmark::State& state) {
    const TermSet out = TermSet::uniform(-120.0, 120.0);
    Activations act{};
    act[2] = 0.4;
    act[3] = 0.8;
    act[4] = 0.15;
    for (auto _ : state) {
        benchmark::DoNotOptimize(defuzzify_centroid(act, out));
    }
}
BENCHMARK(bm_defuzzify);

void bm_plant_step(benchmark::State& state) {
    const PlantConfig cfg;
    Plant plant(cfg, 10.0);
    double u = 10.0;
    for (auto _ : state) {
        u = u > 12.0 ? 8.0 : u + 0.05;
        benchmark::DoNotOptimize(plant.step(u, 0.01));
    }
}
BENCHMARK(bm_plant_step);

void bm_closed_loop(benchmark::State& state) {
    Scenario sc = Scenario::defaults();
    sc.controller.kind = static_cast<ControllerSpec::Kind>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(sc));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(sc.run.duration_s / sc.run.ts_s));
}
BENCHMARK(bm_closed_loop)
    ->Arg(static_cast<int>(ControllerSpec::Kind::pid))
    ->Arg(static_cast<int>(ControllerSpec::Kind::integral))
    ->Arg(static_cast<int>(ControllerSpec::Kind::fuzzy_integral));

void bm_evm_sweep(benchmark::State& state) {
    const Scenario sc = Scenario::defaults();
    EvmSweepConfig cfg = sc.evm;
    cfg.atten_db = {10.0};
    cfg.n_symbols = 1024;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evm_vs_power_sweep(sc.plant, cfg));
    }
}
BENCHMARK(bm_evm_sweep);

} // namespace

BENCHMARK_MAIN();
