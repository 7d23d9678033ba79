#include <benchmark/benchmark.h>

#include "almlab/complexity.hpp"
#include "almlab/harness.hpp"
#include "almlab/threads.hpp"

using namespace almlab;

namespace {

const HypothesisClass& star_class() {
    static const auto C = builtin_class("intervals:20");
    return C;
}

void BM_StarSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(star_number_serial(star_class()).value);
}

void BM_StarParallel(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(star_number(star_class()).value);
}

void BM_XtdSerial(benchmark::State& st) {
    const auto C = builtin_class("gap_lower:8:2");
    for (auto _ : st) benchmark::DoNotOptimize(xtd_report_serial(C, 5).value);
}

void BM_XtdParallel(benchmark::State& st) {
    const auto C = builtin_class("gap_lower:8:2");
    for (auto _ : st) benchmark::DoNotOptimize(xtd_report(C, 5).value);
}

// Trials at one budget with the OpenMP team capped at the given size.
void BM_Trials(benchmark::State& st) {
    ExperimentConfig cfg;
    cfg.class_spec = "thresholds:256";
    cfg.algo = "cal";
    cfg.eps = {0.05};
    cfg.delta = 0.1;
    cfg.trials = 200;
    const Experiment ex(cfg);
    const auto fam = ex.family(0.05);
    set_threads(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(ex.run_trials(fam[0], 0, 0.05, 12).size());
    apply_thread_cap();
}

}  // namespace

BENCHMARK(BM_StarSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StarParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_XtdSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_XtdParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Trials)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
