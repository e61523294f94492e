#include <benchmark/benchmark.h>

#include <random>

#include "sdnn/sdnn.hpp"

using namespace sdnn;

namespace {

FeatureBatch random_batch(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Triple> t;
  for (std::size_t r = 1; r <= rows; ++r)
    for (std::size_t c = 1; c <= cols; ++c)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < density) t.push_back({r, c, 1.0});
  return FeatureBatch(build_from_triples(t, rows, cols));
}

const NetworkModel& model_1024x12() {
  static const NetworkModel m = generate_network(challenge_config(1024, 12, 1));
  return m;
}

}  // namespace

static void BM_Spmm(benchmark::State& state) {
  const auto& layer = model_1024x12().layer(0);
  const auto y = random_batch(static_cast<std::size_t>(state.range(0)), 1024, 0.13, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spmm(y.matrix(), layer.weights));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Spmm)->Arg(64)->Arg(512)->Unit(benchmark::kMicrosecond);

static void BM_Infer(benchmark::State& state) {
  const auto& model = model_1024x12();
  const auto y0 = random_batch(256, 1024, 0.13, 3);
  InferenceConfig cfg;
  cfg.mode = static_cast<ExecutionMode>(state.range(0));
  cfg.workers = static_cast<std::size_t>(state.range(1));
  cfg.batch_tile = 64;
  for (auto _ : state) benchmark::DoNotOptimize(infer(model, y0, cfg));
  // edges traversed per input, as in the challenge rate
  state.counters["rate"] = benchmark::Counter(
      static_cast<double>(model.connections()) * 256.0 * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Infer)
    ->ArgNames({"mode", "workers"})
    ->Args({0, 1})
    ->Args({1, 1})
    ->Args({1, 2})
    ->Args({2, 2})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

static void BM_ReadTsv(benchmark::State& state) {
  const auto text = to_tsv(random_batch(1000, 1024, 0.13, 4).matrix());
  for (auto _ : state) {
    auto list = parse_tsv(text);
    benchmark::DoNotOptimize(build_from_triples(list.triples, 1000, 1024));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ReadTsv)->Unit(benchmark::kMillisecond);

static void BM_ReadBinary(benchmark::State& state) {
  const auto bytes = to_binary(random_batch(1000, 1024, 0.13, 4).matrix());
  for (auto _ : state) benchmark::DoNotOptimize(from_binary(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_ReadBinary)->Unit(benchmark::kMillisecond);

static void BM_GenerateLayer(benchmark::State& state) {
  const LayerGenerator gen(challenge_config(static_cast<std::size_t>(state.range(0)), 120, 1));
  std::size_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen.layer(t++ % gen.depth()));
}
BENCHMARK(BM_GenerateLayer)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

static void BM_OracleLayerStack(benchmark::State& state) {
  const auto& model = model_1024x12();
  const auto y0 = densify(random_batch(16, 1024, 0.13, 5).matrix());
  for (auto _ : state) benchmark::DoNotOptimize(oracle_infer(model, y0));
}
BENCHMARK(BM_OracleLayerStack)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
