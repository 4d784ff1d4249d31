#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "graphite/corpus.hpp"
#include "graphite/inference.hpp"
#include "graphite/model.hpp"
#include "graphite/synthgen.hpp"

namespace {

// To run: ./build/benchmarks/graphite_bench --benchmark_filter=Predict

struct Fixture {
  graphite::SynthDataset data;
  graphite::EncodedDataset encoded;
  graphite::GraphiteModel model;
  std::vector<std::string> titles;

  explicit Fixture(std::size_t train_n) {
    graphite::SynthParams p;
    p.train_n = train_n;
    p.test_n = 2000;
    p.valid_n = 0;
    p.label_n = train_n / 2;
    p.seed = 42;
    data = graphite::generate(p);
    encoded = graphite::encode(data.train);
    model = graphite::build_model(encoded);
    for (const auto& s : data.test) titles.push_back(s.title);
  }
};

const Fixture& fixture(std::size_t train_n) {
  static Fixture small(20000);
  static Fixture large(200000);
  return train_n <= 20000 ? small : large;
}

void BM_Encode(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto encoded = graphite::encode(f.data.train);
    benchmark::DoNotOptimize(encoded);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.data.train.size()));
}
BENCHMARK(BM_Encode)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_BuildModel(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto model = graphite::build_model(f.encoded);
    benchmark::DoNotOptimize(model);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.encoded.instances.size()));
}
BENCHMARK(BM_BuildModel)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_Serialize(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto bytes = graphite::serialize_model(f.model);
    benchmark::DoNotOptimize(bytes);
  }
}
BENCHMARK(BM_Serialize)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  graphite::InferenceSession session(f.model);
  graphite::InferenceConfig config;
  std::size_t i = 0;
  for (auto _ : state) {
    auto ids = session.predict_ids(f.titles[i++ % f.titles.size()], config);
    benchmark::DoNotOptimize(ids);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Predict)->Arg(20000)->Arg(200000)->Unit(benchmark::kMicrosecond);

void BM_PredictBatch(benchmark::State& state) {
  const auto& f = fixture(200000);
  graphite::InferenceConfig config;
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto out = graphite::predict_batch_ids(f.model, f.titles, config, workers);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.titles.size()));
}
BENCHMARK(BM_PredictBatch)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
