// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "gsac/arch_config.hpp"
#include "gsac/channel.hpp"
#include "gsac/codebook.hpp"
#include "gsac/precoder.hpp"

using namespace gsac;

namespace {

ChannelMatrix make_channel(int n_t, int n_r) {
    ChannelParams p;
    p.n_t = n_t;
    p.n_r = n_r;
    p.seed = 1;
    return generate_channel(p);
}

void BM_Partitions(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        long long count = 0;
        for_each_partition(n, [&](std::span<const int>) { ++count; });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_Partitions)->Arg(16)->Arg(32)->Arg(48);

void BM_ChannelGeneration(benchmark::State& state) {
    ChannelParams p;
    p.n_t = static_cast<int>(state.range(0));
    p.n_r = 36;
    for (auto _ : state) {
        ++p.seed;
        benchmark::DoNotOptimize(generate_channel(p).h.data());
    }
}
BENCHMARK(BM_ChannelGeneration)->Arg(64)->Arg(144);

void BM_SicHybrid(benchmark::State& state) {
    const ChannelMatrix h = make_channel(144, 36);
    const GsacConfig cfg = make_config(144, std::vector<int>{5, 2, 1});
    for (auto _ : state)
        benchmark::DoNotOptimize(design_sic_hybrid(h, cfg, 1.0).f.data());
}
BENCHMARK(BM_SicHybrid)->Unit(benchmark::kMillisecond);

void BM_CodebookQuantization(benchmark::State& state) {
    const ChannelMatrix h = make_channel(144, 36);
    const GsacConfig cfg = make_config(144, std::vector<int>{2, 2});
    const UnconstrainedPrecoder u = design_unconstrained(h, cfg, 1.0);
    const BeamsteeringCodebook cb = build_codebook(cfg, static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(quantize_analog(u, cb).f.data());
}
BENCHMARK(BM_CodebookQuantization)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_FcOmp(benchmark::State& state) {
    const ChannelMatrix h = make_channel(144, 36);
    const auto dict = true_aod_dictionary(h);
    for (auto _ : state)
        benchmark::DoNotOptimize(design_fc_omp(h, 8, 1.0, dict).f.data());
}
BENCHMARK(BM_FcOmp)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
