#include <benchmark/benchmark.h>

#include "doa/annihilating_filter.hpp"
#include "doa/music.hpp"
#include "doa/signal_synth.hpp"

namespace {

doa::SnapshotMatrix Data(int sensors, int frames) {
  doa::Scenario s;
  s.angles = doa::AnglesFromDegrees(std::vector<double>{-24, -12, 0, 12, 24});
  s.snapshots = frames;
  s.snr_db = 20.0;
  return doa::SynthSnapshots(doa::ArrayConfig::FromWavelengths(sensors, 0.5), s);
}

// One Sherman-Morrison frame; should scale as M^2.
void BM_RecursiveUpdate(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto x = Data(m, 256);
  auto st = doa::InitRecursiveState(m);
  int k = 0;
  for (auto _ : state) {
    doa::AfRecursiveUpdateInPlace(st, x.data.col(k));
    k = (k + 1) % 256;
    if (k == 0) st = doa::InitRecursiveState(m);
  }
  benchmark::DoNotOptimize(st.tail.data());
  state.SetComplexityN(m);
}
BENCHMARK(BM_RecursiveUpdate)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNSquared);

void BM_BatchAf(benchmark::State& state) {
  const auto x = Data(11, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(doa::AfEstimate(x));
}
BENCHMARK(BM_BatchAf)->Arg(10)->Arg(100)->Arg(1000);

void BM_SingleSnapshotAf(benchmark::State& state) {
  const auto x = Data(11, 1);
  for (auto _ : state) benchmark::DoNotOptimize(doa::AfEstimateSingle(x, 5));
}
BENCHMARK(BM_SingleSnapshotAf);

void BM_Music(benchmark::State& state) {
  const auto x = Data(11, 100);
  const doa::MusicOptions options{.n_sources = 5, .alpha = static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(doa::MusicEstimate(x, options));
}
BENCHMARK(BM_Music)->Arg(0)->Arg(25);

}  // namespace

BENCHMARK_MAIN();
