#include <benchmark/benchmark.h>

#include "kwsql/executor.hpp"
#include "kwsql/pipeline.hpp"

using namespace kwsql;

namespace {

const std::filesystem::path kData = KWSQL_BENCH_DATA_DIR;

const Dataset& imdb() {
  static const Dataset ds = open_dataset(kData / "imdb_toy", false);
  return ds;
}

const Dataset& dense() {
  static const Dataset ds = open_dataset(kData / "mondial_dense", false);
  return ds;
}

const Taxonomy& wordnet() {
  static const Taxonomy tax = load_taxonomy(kData / "mini_wordnet.json");
  return tax;
}

void BM_OpenDataset(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(open_dataset(kData / "mondial_dense", false));
}
BENCHMARK(BM_OpenDataset);

void BM_KeywordMatching(benchmark::State& state) {
  auto q = KeywordQuery::parse("will smith films");
  for (auto _ : state) {
    benchmark::DoNotOptimize(vkm_generate(q, imdb().value_index));
    benchmark::DoNotOptimize(skm_generate(q, imdb().db, {}, wordnet()));
  }
}
BENCHMARK(BM_KeywordMatching);

void BM_QueryMatching(benchmark::State& state) {
  const auto& ds = imdb();
  auto q = KeywordQuery::parse("will smith films");
  auto vkms = vkm_generate(q, ds.value_index);
  auto skms = skm_generate(q, ds.db, {}, wordnet());
  for (auto _ : state) {
    auto qms = qm_generate(q, vkms, skms, 3);
    benchmark::DoNotOptimize(qm_rank(std::move(qms), ds.value_index, ds.schema_index, wordnet(), {}));
  }
}
BENCHMARK(BM_QueryMatching);

void BM_Interleave(benchmark::State& state) {
  const auto& ds = dense();
  auto r = run_query(ds, wordnet(), "colombia brazil", {});
  SetupConfig cfg;
  cfg.max_cjn_size = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cjn_interleave(r.query_matches[0], ds.graph, cfg, 50));
}
BENCHMARK(BM_Interleave)->DenseRange(3, 6);

void BM_FullQuery(benchmark::State& state) {
  EngineConfig cfg;
  cfg.setup.p_cjn = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_query(imdb(), wordnet(), "will smith films", cfg));
}
BENCHMARK(BM_FullQuery)->Arg(0)->Arg(9);

void BM_EvaluateTopNetwork(benchmark::State& state) {
  auto r = run_query(imdb(), wordnet(), "will smith films", {});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(r.cjns.networks[0], imdb().db));
}
BENCHMARK(BM_EvaluateTopNetwork);

// Long queries stress the cover enumeration.
void BM_LongQuery(benchmark::State& state) {
  std::string words[] = {"colombia", "brazil", "peru", "argentina", "france", "germany", "lima", "bogota"};
  std::string q;
  for (int i = 0; i < state.range(0); ++i) q += words[i] + " ";
  for (auto _ : state) benchmark::DoNotOptimize(run_query(dense(), wordnet(), q, {}));
}
BENCHMARK(BM_LongQuery)->DenseRange(2, 8, 2);

}  // namespace

BENCHMARK_MAIN();
