#include <benchmark/benchmark.h>

#include "transid/experiment.hpp"

namespace {

std::vector<transid::ExperimentConfig> make_configs(int count, int n, int m) {
    std::vector<transid::ExperimentConfig> configs;
    for (int i = 0; i < count; ++i) {
        transid::ExperimentConfig c;
        c.n = n;
        c.m = m;
        c.sigma = (i % 2 == 0) ? 0.05 : 0.5;
        c.seed = static_cast<std::uint64_t>(i);
        configs.push_back(c);
    }
    return configs;
}

void BM_BatchSerial(benchmark::State& state) {
    const auto configs = make_configs(32, static_cast<int>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(transid::run_batch_serial(configs, true));
    }
}

void BM_BatchParallel(benchmark::State& state) {
    const auto configs = make_configs(32, static_cast<int>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(transid::run_batch_parallel(configs, true));
    }
}

BENCHMARK(BM_BatchSerial)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
