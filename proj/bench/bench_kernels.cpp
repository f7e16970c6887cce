// Serial reference vs OpenMP kernels. Each benchmark takes the execution
// mode as its argument: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "graphlang/corpus.hpp"
#include "graphlang/corruption.hpp"
#include "graphlang/eval.hpp"
#include "graphlang/parallel.hpp"
#include "graphlang/preference.hpp"
#include "graphlang/random.hpp"
#include "graphlang/structure.hpp"
#include "graphlang/verbalizer.hpp"

using namespace graphlang;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

RandomGraphSpec spec(std::size_t n) {
  RandomGraphSpec s;
  s.num_nodes = n;
  s.edge_probability = 0.4;
  s.weighted = true;
  return s;
}

void BM_GenStructureBatch(benchmark::State& state) {
  for (auto _ : state) {
    auto batch = gen_structure_batch(StructureTask::shortest_path, spec(10), 1, 2000, mode(state));
    benchmark::DoNotOptimize(batch);
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_RoundTrip(benchmark::State& state) {
  std::vector<Graph> graphs;
  for (std::uint64_t i = 0; i < 2000; ++i) graphs.push_back(gen_random_graph(spec(12), i));
  for (auto _ : state) {
    auto ok = map_indices<char>(graphs.size(), mode(state), [&](std::size_t i) -> char {
      return graph_equal(parse_graph(verbalize(graphs[i])).graph, graphs[i]);
    });
    benchmark::DoNotOptimize(ok);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(graphs.size()));
}

void BM_PreferenceBatch(benchmark::State& state) {
  auto records = gen_structure_batch(StructureTask::connectivity, spec(8), 3, 2000, Exec::serial);
  for (auto _ : state) {
    auto batch = make_preference_batch(records, ScenarioKind::unfactual, 7, mode(state));
    benchmark::DoNotOptimize(batch);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}

void BM_DpoLoss(benchmark::State& state) {
  Rng rng(5);
  std::vector<LogProbQuad> batch(1 << 20);
  for (auto& q : batch) q = {-10 * rng.unit(), -10 * rng.unit(), -10 * rng.unit(), -10 * rng.unit()};
  for (auto _ : state) benchmark::DoNotOptimize(dpo_loss(batch, 0.1, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}

void BM_DpoGrad(benchmark::State& state) {
  Rng rng(6);
  std::vector<LogProbQuad> batch(1 << 20);
  for (auto& q : batch) q = {-10 * rng.unit(), -10 * rng.unit(), -10 * rng.unit(), -10 * rng.unit()};
  for (auto _ : state) benchmark::DoNotOptimize(dpo_grad(batch, 0.1, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}

void BM_GradeBleu(benchmark::State& state) {
  auto records = gen_structure_batch(StructureTask::structure_generation, spec(8), 9, 2000, Exec::serial);
  std::vector<CorpusRecord> gold;
  std::vector<Prediction> preds;
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].meta["id"] = std::to_string(i);
    gold.push_back(assemble(records[i]));
    preds.push_back({std::to_string(i), gold.back().target});
  }
  for (auto _ : state) benchmark::DoNotOptimize(grade_run(preds, gold, Metric::bleu, MatchMode::normalized, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gold.size()));
}

void BM_CollaborationGraph(benchmark::State& state) {
  Rng rng(8);
  UserItemPrefs prefs;
  for (int u = 0; u < 400; ++u) {
    auto& items = prefs["user" + std::to_string(u)];
    for (int k = 0; k < 30; ++k) items.insert("item" + std::to_string(rng.below(300)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(build_collaboration_graph(prefs, 5, mode(state)));
}

}  // namespace

BENCHMARK(BM_GenStructureBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RoundTrip)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PreferenceBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DpoLoss)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DpoGrad)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradeBleu)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollaborationGraph)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
