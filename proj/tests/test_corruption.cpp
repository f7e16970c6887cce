#include <doctest.h>

#include <set>

#include "graphlang/corpus.hpp"
#include "graphlang/corruption.hpp"
#include "graphlang/error.hpp"
#include "graphlang/structure.hpp"
#include "support.hpp"

using namespace graphlang;

namespace {

Graph bluesman() {
  Graph g;
  g.name = "knowledge-graph";
  g.edges = {{"Bluesman", "Tak Matsumoto", true, "performer", std::nullopt},
             {"Bluesman", "Japan", true, "country of origin", std::nullopt},
             {"Bluesman", "VERMILLION RECORDS", true, "publisher", std::nullopt}};
  return canonicalize(g);
}

TaskRecord qa_record() {
  TaskRecord r;
  r.task = "wikidata_qa";
  r.cluster = Cluster::graph_qa;
  r.instruction = "Answer the question using the graph.";
  r.graph = bluesman();
  r.passage = "Q: Who performed Bluesman?";
  r.answer = "Tak Matsumoto";
  return r;
}

TaskRecord ie_record() {
  TaskRecord r;
  r.task = "ie";
  r.cluster = Cluster::ie;
  r.instruction = "Extract a knowledge graph.";
  r.passage = "Bluesman is an album by Tak Matsumoto from Japan.";
  r.graph = bluesman();
  return r;
}

// Multiset difference of edges, both ways.
std::pair<std::size_t, std::size_t> edge_diff(const Graph& a, const Graph& b) {
  std::multiset<std::string> x, y;
  for (const auto& e : canonicalize(a).edges) x.insert(render_edge(e, GraphKind::knowledge));
  for (const auto& e : canonicalize(b).edges) y.insert(render_edge(e, GraphKind::knowledge));
  std::size_t only_a = 0, only_b = 0;
  for (const auto& s : x) only_a += x.count(s) > y.count(s) ? 1 : 0;
  for (const auto& s : y) only_b += y.count(s) > x.count(s) ? 1 : 0;
  return {only_a, only_b};
}

}  // namespace

TEST_CASE("scenario names and validity") {
  CHECK(parse_scenario_kind("correct-graph-wrong-answer") == ScenarioKind::correct_graph_wrong_answer);
  CHECK(parse_scenario_kind("unfaithful") == ScenarioKind::unfaithful);
  CHECK_FALSE(parse_scenario_kind("hallucinated"));
  CHECK(parse_edit_kind("replace-node") == EditKind::replace_node);
  CHECK_FALSE((Scenario{ScenarioFamily::reasoning, ScenarioKind::wrong_input}.valid()));
  CHECK_FALSE((Scenario{ScenarioFamily::generation, ScenarioKind::correct_graph_wrong_answer}.valid()));
  CHECK((Scenario{ScenarioFamily::generation, ScenarioKind::conflict}.valid()));
}

TEST_CASE("refusal strings") {
  const Edge wrong{"Bluesman", "France", true, "country of origin", std::nullopt};
  std::vector<EditOp> log{{EditKind::replace_edge, Edge{"Bluesman", "Japan", true, "country of origin", std::nullopt}, wrong}};
  CHECK(render_refusal({ScenarioFamily::reasoning, ScenarioKind::unfactual}, log) ==
        "Sorry, the graph contains some wrong knowledge in the follow: ('Bluesman' -> 'France')[relation='country of "
        "origin']. So the question is unanswerable, you had better provide a correct graph.");

  const Edge anchor{"Bluesman", "Japan", true, "country of origin", std::nullopt};
  const Edge added{"Bluesman", "Japan", true, "publisher", std::nullopt};
  std::vector<EditOp> conflict{{EditKind::add_edge, anchor, added}};
  CHECK(render_refusal({ScenarioFamily::reasoning, ScenarioKind::conflict}, conflict) ==
        "Sorry, the graph contains some conflict edges in the follow: ('Bluesman' -> 'Japan')[relation='country of "
        "origin'], ('Bluesman' -> 'Japan')[relation='publisher']. So the question is unanswerable, you had better "
        "provide a correct graph.");

  std::vector<EditOp> missing{{EditKind::remove_node, NodeId("Japan"), std::nullopt}};
  CHECK(render_refusal({ScenarioFamily::reasoning, ScenarioKind::missing}, missing) ==
        "Sorry, the graph does not exist node Japan. So the question is unanswerable, you had better provide a "
        "correct graph.");

  CHECK(render_missing_answer("Tak Matsumoto") ==
        "Based on the world knowledge, the correct answer to the question is Tak Matsumoto, but the answer does not "
        "exist in the graph.");
  CHECK(render_corrected_answer(log, "Japan") ==
        "Sorry, the graph contains some wrong knowledge in the follow: ('Bluesman' -> 'France')[relation='country of "
        "origin']. based on the corrected graph, the answer can be Japan.");
  CHECK_THROWS_AS(render_refusal({ScenarioFamily::reasoning, ScenarioKind::correct_graph_wrong_answer}, log),
                  WrongScenario);
  CHECK_THROWS_AS(render_refusal({ScenarioFamily::reasoning, ScenarioKind::missing}, {}), WrongScenario);
}

TEST_CASE("edits are replayable and change the graph") {
  const std::vector<std::vector<EditKind>> plans = {
      {EditKind::replace_edge},
      {EditKind::add_edge, EditKind::remove_edge},
      {EditKind::replace_node, EditKind::add_node, EditKind::remove_node},
      {EditKind::remove_edge, EditKind::remove_edge, EditKind::add_edge},
  };
  VocabularyPool pool{{"Pool A", "Pool B", "Pool C", "Pool D"}, {"rel x", "rel y"}};
  std::size_t attempted = 0, succeeded = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Graph g = test::random_rich_graph(seed);
    const auto& plan = plans[seed % plans.size()];
    const bool roomy = g.nodes.size() >= 3 && g.edges.size() >= 3;
    attempted += roomy;
    EditResult r;
    try {
      r = edit_graph(g, plan, seed, pool);
    } catch (const InsufficientMaterial&) {
      continue;
    }
    succeeded += roomy;
    INFO("seed " << seed);
    CHECK_FALSE(graph_equal(r.graph, g));
    CHECK(r.log.size() == plan.size());
    CHECK(graph_equal(apply_edit_log(g, r.log), r.graph));
    CHECK(verbalize(r.graph) != verbalize(g));
    for (const auto& v : validate(r.graph)) CHECK(v.message.find("dangling") == std::string::npos);
  }
  // Tiny graphs run out of material; everything else should edit cleanly.
  CHECK(succeeded * 20 > attempted * 19);
}

TEST_CASE("single edge edits touch exactly the logged items") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Graph g = bluesman();
    auto rep = edit_graph(g, {EditKind::replace_edge}, seed, {{"France"}, {"genre"}});
    REQUIRE(rep.log.size() == 1);
    CHECK(edge_diff(g, rep.graph) == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(std::get<Edge>(*rep.log[0].before) != std::get<Edge>(*rep.log[0].after));

    auto add = edit_graph(g, {EditKind::add_edge}, seed, {{"France"}, {"genre"}});
    CHECK(edge_diff(g, add.graph) == std::pair<std::size_t, std::size_t>{0, 1});
    auto rem = edit_graph(g, {EditKind::remove_edge}, seed);
    CHECK(edge_diff(g, rem.graph) == std::pair<std::size_t, std::size_t>{1, 0});
  }
}

TEST_CASE("replacement nodes never merge into existing ones") {
  Graph g;
  g.kind = GraphKind::structure;
  g.edges = {{"0", "1", false}, {"1", "2", false}};
  g = canonicalize(g);
  auto r = edit_graph(g, {EditKind::replace_node}, 5);
  CHECK(r.graph.nodes.size() == 3);
  CHECK(r.graph.has_node("3"));
  CHECK_THROWS_AS(edit_graph(bluesman(), {EditKind::replace_node}, 1), InsufficientMaterial);
}

TEST_CASE("conflict edges contradict an existing triple") {
  Graph g = bluesman();
  auto r = make_conflict(g, 3, {{}, {"genre"}});
  REQUIRE(r.log.size() == 1);
  const Edge& anchor = std::get<Edge>(*r.log[0].before);
  const Edge& added = std::get<Edge>(*r.log[0].after);
  CHECK(anchor.source == added.source);
  CHECK(anchor.target == added.target);
  CHECK(anchor.relation != added.relation);
  CHECK(r.graph.edges.size() == g.edges.size() + 1);

  Graph weighted;
  weighted.edges = {{"0", "1", false, std::nullopt, Rational(2)}};
  auto w = make_conflict(weighted, 1);
  REQUIRE(w.graph.edges.size() == 2);
  CHECK(w.graph.edges[0].weight != w.graph.edges[1].weight);
  CHECK_THROWS_AS(make_conflict(Graph{}, 1), InsufficientMaterial);
}

TEST_CASE("reasoning pairs") {
  TaskRecord qa = qa_record();
  auto missing = make_reasoning_preference(qa, ScenarioKind::missing, {}, 4);
  CHECK(missing.chosen ==
        "Based on the world knowledge, the correct answer to the question is Tak Matsumoto, but the answer does not "
        "exist in the graph.");
  CHECK(missing.rejected == "Tak Matsumoto");
  CHECK(missing.prompt.find("'Tak Matsumoto'") == std::string::npos);

  auto unfactual = make_reasoning_preference(qa, ScenarioKind::unfactual, {}, 4, {1, {{"France"}, {"genre"}}, true});
  CHECK(unfactual.chosen.rfind("Sorry, the graph contains some wrong knowledge in the follow: ", 0) == 0);
  CHECK(unfactual.chosen.find("based on the corrected graph, the answer can be Tak Matsumoto.") != std::string::npos);

  RandomGraphSpec spec{5, 0.6, false, false, {}, std::nullopt};
  TaskRecord conn = gen_structure_task(StructureTask::connectivity, spec, 8);
  conn.answer = "The answer is yes.";
  auto wrong = make_reasoning_preference(conn, ScenarioKind::correct_graph_wrong_answer,
                                         {"The answer is no.", "The answer is yes."}, 1);
  CHECK(wrong.chosen == "The answer is yes.");
  CHECK(wrong.rejected == "The answer is no.");
  CHECK(wrong.prompt == assemble(conn).prompt);
  CHECK_THROWS_AS(make_reasoning_preference(conn, ScenarioKind::correct_graph_wrong_answer, {"The answer is yes."}, 1),
                  EmptyPool);

  auto refusal = make_reasoning_preference(conn, ScenarioKind::missing, {}, 2);
  CHECK(refusal.chosen.rfind("Sorry, the graph does not exist node ", 0) == 0);
  CHECK(refusal.rejected == "The answer is yes.");

  TaskRecord cls = qa;
  cls.cluster = Cluster::node_cls;
  CHECK_THROWS_AS(make_reasoning_preference(cls, ScenarioKind::unfactual, {}, 1), WrongScenario);
  CHECK_THROWS_AS(make_reasoning_preference(ie_record(), ScenarioKind::unfactual, {}, 1), WrongScenario);
  CHECK_THROWS_AS(make_reasoning_preference(qa, ScenarioKind::unfactual, {}, 1, {0, {}, true}), InvalidArgument);
}

TEST_CASE("generation pairs") {
  TaskRecord ie = ie_record();
  const std::string gold = verbalize(*ie.graph);
  auto wrong = make_generation_preference(ie, ScenarioKind::wrong_input, {gold, "Graph[name='x'] {}"}, 1);
  CHECK(wrong.chosen == gold);
  CHECK(wrong.rejected == "Graph[name='x'] {}");

  auto unfaithful = make_generation_preference(ie, ScenarioKind::unfaithful, {}, 1, {1, {{"Osaka"}, {}}, true});
  CHECK(unfaithful.chosen == gold);
  CHECK(unfaithful.rejected.find("'Osaka'") != std::string::npos);

  auto unfactual = make_generation_preference(ie, ScenarioKind::unfactual, {}, 1, {1, {{}, {"genre"}}, true});
  CHECK(unfactual.rejected == gold);
  auto flipped = make_generation_preference(ie, ScenarioKind::unfactual, {}, 1, {1, {{}, {"genre"}}, false});
  CHECK(flipped.chosen == gold);
  CHECK(flipped.rejected == unfactual.chosen);

  auto conflict = make_generation_preference(ie, ScenarioKind::conflict, {}, 1, {2, {{}, {"genre"}}, true});
  CHECK(conflict.chosen == gold);
  CHECK(conflict.edit_log.size() == 2);

  TaskRecord text_only = ie;
  text_only.graph.reset();
  text_only.answer = gold;
  CHECK(make_generation_preference(text_only, ScenarioKind::unfactual, {}, 1, {1, {{}, {"genre"}}, true}) ==
        unfactual);
  text_only.answer = "no graph here";
  CHECK_THROWS_AS(make_generation_preference(text_only, ScenarioKind::unfactual, {}, 1), UnparseableGraph);
  CHECK_THROWS_AS(make_generation_preference(ie, ScenarioKind::correct_graph_wrong_answer, {}, 1), WrongScenario);
}

TEST_CASE("preference invariants over many seeds") {
  RandomGraphSpec spec{6, 0.5, false, false, {}, std::nullopt};
  const ScenarioKind kinds[] = {ScenarioKind::unfactual, ScenarioKind::conflict, ScenarioKind::missing};
  std::size_t built = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    TaskRecord r = gen_structure_task(StructureTask::cycle, spec, seed);
    const ScenarioKind kind = kinds[seed % 3];
    const int edits = 1 + static_cast<int>(seed % 3);
    PreferencePair p;
    try {
      p = make_preference(r, kind, {}, seed, {edits, {}, true});
    } catch (const InsufficientMaterial&) {
      continue;
    }
    ++built;
    INFO("seed " << seed);
    CHECK(p.chosen != p.rejected);
    CHECK_FALSE(p.prompt.empty());
    CHECK(p.edit_log.size() >= static_cast<std::size_t>(edits));
    Graph replay = apply_edit_log(*r.graph, p.edit_log);
    CHECK(p.prompt == assemble([&] {
                        TaskRecord c = r;
                        c.graph = replay;
                        return c;
                      }(), VerbalStyle::for_graph(*r.graph))
                          .prompt);
  }
  CHECK(built > 900);
}

TEST_CASE("batches skip failing records and ignore execution mode") {
  std::vector<TaskRecord> records;
  RandomGraphSpec spec{5, 0.5, false, false, {}, std::nullopt};
  for (std::uint64_t i = 0; i < 40; ++i) records.push_back(gen_structure_task(StructureTask::degree, spec, i));
  TaskRecord empty = records[0];
  empty.graph = Graph{};
  empty.graph->kind = GraphKind::structure;
  records.push_back(empty);
  auto s = make_preference_batch(records, ScenarioKind::unfactual, 7, Exec::serial);
  auto p = make_preference_batch(records, ScenarioKind::unfactual, 7, Exec::parallel);
  CHECK(s.pairs == p.pairs);
  CHECK(s.skipped == p.skipped);
  REQUIRE_FALSE(s.skipped.empty());
  CHECK(s.skipped.back().first == 40);
  CHECK(s.pairs.size() + s.skipped.size() == records.size());
}
