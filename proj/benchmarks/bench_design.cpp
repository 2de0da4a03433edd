// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "murelay/metrics.hpp"
#include "murelay/model.hpp"
#include "murelay/optimizer.hpp"
#include "murelay/relay.hpp"

namespace {

using namespace murelay;

NetworkConfig bench_config(int n, double p_db) {
  NetworkConfig cfg;
  cfg.n_s = cfg.n_r = cfg.n_d = n;
  cfg.l_sr = cfg.l_rd = 5.0;
  cfg.p1 = cfg.p2 = cfg.p_r = std::pow(10.0, p_db / 10.0);
  cfg.seed = 1;
  return cfg;
}

void BM_GenerateChannels(benchmark::State& state) {
  const NetworkConfig cfg = bench_config(static_cast<int>(state.range(0)), 20.0);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_channels(cfg, trial++));
  }
}
BENCHMARK(BM_GenerateChannels)->Arg(2)->Arg(4)->Arg(8);

void BM_SumCapacity(benchmark::State& state) {
  const NetworkConfig cfg = bench_config(static_cast<int>(state.range(0)), 20.0);
  const ChannelSet ch = generate_channels(cfg, 0);
  const Design nas = baseline_design(ch, cfg, Scheme::kNas);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sum_capacity(ch, nas.f1, nas.f2, nas.g));
  }
}
BENCHMARK(BM_SumCapacity)->Arg(2)->Arg(4)->Arg(8);

void BM_SolveRelay(benchmark::State& state) {
  const NetworkConfig cfg = bench_config(4, 20.0);
  const ChannelSet ch = generate_channels(cfg, 0);
  const Design nas = baseline_design(ch, cfg, Scheme::kNas);
  const RelayGeometry geo = relay_geometry(ch, nas.f1, nas.f2);
  const Mode mode = state.range(0) == 0 ? Mode::kCapacity : Mode::kMse;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_relay(geo, cfg.p_r, mode));
  }
}
BENCHMARK(BM_SolveRelay)->Arg(0)->Arg(1);

void BM_JdsOptimize(benchmark::State& state) {
  NetworkConfig cfg = bench_config(4, static_cast<double>(state.range(0)));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const ChannelSet ch = generate_channels(cfg, trial++);
    benchmark::DoNotOptimize(jds_optimize(ch, cfg));
  }
}
BENCHMARK(BM_JdsOptimize)->Arg(12)->Arg(20)->Arg(28)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
