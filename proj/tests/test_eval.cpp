#include <doctest.h>

#include <nlohmann/json.hpp>

#include "graphlang/error.hpp"
#include "graphlang/eval.hpp"
#include "graphlang/random.hpp"
#include "oracles.hpp"

using namespace graphlang;

namespace {

CorpusRecord gold_record(const std::string& id, const std::string& target) {
  CorpusRecord r;
  r.task = "t";
  r.cluster = Cluster::graph_qa;
  r.instruction = "i";
  r.prompt = "p";
  r.target = target;
  r.meta["id"] = id;
  return r;
}

Graph triples(std::initializer_list<std::tuple<const char*, const char*, const char*>> list) {
  Graph g;
  for (const auto& [s, r, t] : list) g.edges.push_back({s, t, true, std::string(r), std::nullopt});
  return canonicalize(g);
}

}  // namespace

TEST_CASE("answer matching") {
  CHECK(normalize("  The Answer   is YES. ") == "the answer is yes");
  CHECK(exact_match("Tak Matsumoto.", "tak matsumoto") == 1.0);
  CHECK(exact_match("Tak", "Tak Matsumoto") == 0.0);
  CHECK(hits_at_1("Japan", {"Nippon", "japan"}) == 1.0);
  CHECK(hits_at_1("France", {"Japan"}) == 0.0);
  CHECK_THROWS_AS(hits_at_1("x", {}), EmptyGoldSet);
}

TEST_CASE("set F1") {
  auto f = f1_from_counts(2, 3, 3);
  CHECK(f.precision == doctest::Approx(2.0 / 3.0));
  CHECK(f.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(f1_from_counts(0, 0, 0).f1 == 1.0);
  CHECK(f1_from_counts(0, 2, 0).f1 == 0.0);

  Graph pred = triples({{"A", "r", "x"}, {"B", "r", "x"}, {"C", "r", "x"}});
  Graph gold = triples({{"A", "r", "x"}, {"B", "r", "x"}, {"D", "r", "x"}});
  auto g = graph_f1(pred, gold);
  CHECK(g.re.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(g.ner.f1 == doctest::Approx(3.0 / 4.0));
  CHECK(graph_f1(gold, gold).graph.f1 == 1.0);
}

TEST_CASE("matching modes") {
  Graph pred = triples({{"bluesman", "Performer", "tak  matsumoto"}});
  Graph gold = triples({{"Bluesman", "performer", "Tak Matsumoto"}});
  CHECK(graph_f1(pred, gold).re.f1 == 1.0);
  CHECK(graph_f1(pred, gold, MatchMode::exact).re.f1 == 0.0);
  Graph u1, u2;
  u1.edges = {{"a", "b", false}};
  u2.edges = {{"b", "a", false}};
  CHECK(graph_f1(u1, u2).re.f1 == 1.0);
}

TEST_CASE("bleu basics") {
  CHECK(bleu({"the cat sat on the mat ."}, {"the cat sat on the mat ."}) == doctest::Approx(1.0));
  CHECK(bleu({"alpha beta gamma delta"}, {"one two three four five"}) < 0.05);
  CHECK(bleu_tokenize("Hello, World!") == std::vector<std::string>{"hello", ",", "world", "!"});
  CHECK_THROWS_AS(bleu({"a"}, {}), LengthMismatch);
  CHECK_THROWS_AS(bleu({}, {}), EmptyInput);
}

TEST_CASE("bleu agrees with the multiset oracle") {
  const std::vector<std::string> words = {"the", "film", "is", "nice", "graph", "node", "edge", ",", ".", "a", "of"};
  Rng rng(17);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::string> cands, refs;
    const auto n = 1 + rng.below(4);
    for (std::uint64_t i = 0; i < n; ++i) {
      auto sentence = [&] {
        std::string s;
        const auto len = 1 + rng.below(12);
        for (std::uint64_t w = 0; w < len; ++w) s += (w ? " " : "") + rng.pick(words);
        return s;
      };
      cands.push_back(sentence());
      refs.push_back(rng.bernoulli(0.3) ? cands.back() : sentence());
    }
    CHECK(bleu(cands, refs) == doctest::Approx(oracle::bleu(cands, refs)).epsilon(1e-9));
  }
}

TEST_CASE("metric names") {
  CHECK(parse_metric("Hits@1") == Metric::hits1);
  CHECK(parse_metric("f1-re") == Metric::f1_re);
  CHECK(parse_metric("F1_GRAPH") == Metric::f1_graph);
  CHECK_FALSE(parse_metric("rouge"));
  CHECK(to_string(Metric::f1_ner) == "F1_NER");
}

TEST_CASE("grading runs") {
  std::vector<CorpusRecord> gold = {gold_record("a", "yes"), gold_record("b", "no"), gold_record("c", "3"),
                                    gold_record("d", "Japan")};
  std::vector<Prediction> preds = {{"d", "japan."}, {"a", "Yes"}, {"b", "yes"}, {"c", "3"}};
  auto report = grade_run(preds, gold, Metric::em);
  CHECK(report.value == doctest::Approx(0.75));
  CHECK(report.count == 4);
  REQUIRE(report.per_example.size() == 4);
  CHECK(report.per_example[1].id == "b");
  CHECK(report.per_example[1].score == 0.0);
  auto json = nlohmann::json::parse(report.to_json());
  CHECK(json["metric"] == "EM");
  CHECK(report.to_table().find("EM") != std::string::npos);

  preds.pop_back();
  CHECK_THROWS_AS(grade_run(preds, gold, Metric::em), IdMismatch);
  preds.push_back({"a", "again"});
  CHECK_THROWS_AS(grade_run(preds, gold, Metric::em), IdMismatch);
}

TEST_CASE("hits@1 aliases and graph grading") {
  auto g = gold_record("0", "Japan");
  g.meta["aliases"] = "Nippon|JP";
  CHECK(grade_run({{"0", "nippon"}}, {g}, Metric::hits1).value == 1.0);

  auto kg = gold_record("0", "Graph[name='g'] {\n    entity_list = ['A', 'B'];\n    triple_list = [('A' -> 'B')[relation='r']];\n}");
  auto good = grade_run({{"0", kg.target}}, {kg}, Metric::f1_re);
  CHECK(good.value == 1.0);
  auto bad = grade_run({{"0", "nothing"}}, {kg}, Metric::f1_graph);
  CHECK(bad.value == 0.0);
  CHECK(bad.parse_failures == 1);
  auto broken_gold = gold_record("0", "not a graph");
  CHECK_THROWS_AS(grade_run({{"0", kg.target}}, {broken_gold}, Metric::f1_ner), SchemaError);
}

TEST_CASE("grading is independent of execution mode") {
  std::vector<CorpusRecord> gold;
  std::vector<Prediction> preds;
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    gold.push_back(gold_record(std::to_string(i), "answer " + std::to_string(rng.below(5))));
    preds.push_back({std::to_string(i), "answer " + std::to_string(rng.below(5))});
  }
  for (Metric m : {Metric::em, Metric::bleu}) {
    auto s = grade_run(preds, gold, m, MatchMode::normalized, Exec::serial);
    auto p = grade_run(preds, gold, m, MatchMode::normalized, Exec::parallel);
    CHECK(s.value == p.value);
    CHECK(s.to_json() == p.to_json());
  }
}
