#include <doctest.h>

#include "graphlang/error.hpp"
#include "graphlang/eval.hpp"
#include "graphlang/verbalizer.hpp"
#include "support.hpp"

using namespace graphlang;

namespace {

Graph complete4() {
  Graph g;
  g.name = "structure-graph";
  g.kind = GraphKind::structure;
  for (int i = 0; i < 4; ++i) g.nodes.push_back(std::to_string(i));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) g.edges.push_back({std::to_string(i), std::to_string(j), false});
  return g;
}

Graph bluesman() {
  Graph g;
  g.name = "knowledge-graph";
  g.nodes = {"Bluesman", "Tak Matsumoto", "VERMILLION RECORDS", "September 2, 2020", "Japan"};
  g.edges = {{"Bluesman", "September 2, 2020", true, "publication date", std::nullopt},
             {"Bluesman", "Tak Matsumoto", true, "performer", std::nullopt},
             {"Bluesman", "VERMILLION RECORDS", true, "publisher", std::nullopt},
             {"Bluesman", "Japan", true, "country of origin", std::nullopt}};
  return g;
}

std::size_t count_recovered(const ParseResult& r) { return r.recovered_count(); }

}  // namespace

TEST_CASE("complete graph golden file") {
  CHECK(verbalize(complete4()) == test::fixture("golden/complete4.txt"));
}

TEST_CASE("empty graph verbalization") {
  Graph g;
  g.name = "g";
  CHECK(verbalize(g) == "Graph[name='g'] {\n    entity_list = [];\n    triple_list = [];\n}");
}

TEST_CASE("knowledge graph uses triple syntax") {
  const std::string text = verbalize(bluesman());
  CHECK(text.find("('Bluesman' -> 'September 2, 2020')[relation='publication date']") != std::string::npos);
  CHECK(text.rfind("Graph[name='knowledge-graph'] {\n    entity_list = [", 0) == 0);
}

TEST_CASE("weights, properties and escapes") {
  Graph g;
  g.name = "w";
  g.edges = {{"it's", "a\\b", true, "r", Rational(5, 2)}, {"x", "y", false, std::nullopt, Rational(3)}};
  g.properties = {{"x", "review", "The film is nice."}, {"it's", "note", "say 'hi'"}};
  const std::string text = verbalize(g);
  CHECK(text.find("('it\\'s' -> 'a\\\\b')[relation='r', weight=2.5]") != std::string::npos);
  CHECK(text.find("('x' <-> 'y')[weight=3]") != std::string::npos);
  CHECK(text.find("    x.review='The film is nice.';") != std::string::npos);
  CHECK(text.find("    'it\\'s'.note='say \\'hi\\'';") != std::string::npos);
  auto parsed = parse_graph(text);
  CHECK(parsed.diagnostics.empty());
  CHECK(graph_equal(parsed.graph, g));
}

TEST_CASE("style controls vocabulary and properties") {
  Graph g = bluesman();
  g.properties = {{"Bluesman", "kind", "album"}};
  VerbalStyle style;
  style.graph_name = "other";
  style.vocabulary = Vocabulary::node;
  style.include_properties = false;
  const std::string text = verbalize(g, style);
  CHECK(text.rfind("Graph[name='other'] {\n    node_list = [", 0) == 0);
  CHECK(text.find("edge_list") != std::string::npos);
  CHECK(text.find("kind") == std::string::npos);
  style.graph_name = "";
  CHECK_THROWS_AS(verbalize(g, style), InvalidArgument);
}

TEST_CASE("round trip over random rich graphs") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Graph g = test::random_rich_graph(seed);
    const std::string text = verbalize(g);
    auto parsed = parse_graph(text);
    INFO("seed " << seed << "\n" << text);
    CHECK(parsed.diagnostics.empty());
    CHECK(graph_equal(parsed.graph, g));
    CHECK(verbalize(parsed.graph, VerbalStyle::for_graph(g)) == text);
  }
}

TEST_CASE("model output with a dangling entity") {
  auto r = parse_graph(test::fixture("data/bluesman_model.txt"));
  CHECK(r.graph.nodes.size() == 6);
  CHECK(r.graph.edges.size() == 4);
  CHECK(count_recovered(r) == 1);
  CHECK(r.graph.has_node("Japan"));
  CHECK(r.graph.has_node("B'z"));
}

TEST_CASE("reference snippet repairs four dangling entities") {
  auto r = parse_graph(test::fixture("data/bluesman_reference.txt"));
  CHECK(r.graph.nodes.size() == 9);
  CHECK(r.graph.edges.size() == 4);
  CHECK(count_recovered(r) == 4);
}

TEST_CASE("damaged model output still yields its triples") {
  auto r = parse_graph(test::fixture("data/bluesman_baseline.txt"));
  CHECK(r.graph.nodes.size() == 4);
  CHECK(r.graph.edges.size() == 4);
  const Edge hit{"Bluesman", "Tak Matsumoto", true, "performer", std::nullopt};
  CHECK(std::find(r.graph.edges.begin(), r.graph.edges.end(), hit) != r.graph.edges.end());
}

TEST_CASE("parser recovery") {
  SUBCASE("missing semicolons") {
    auto r = parse_graph("Graph[name='g'] {\n    entity_list = ['A', 'B']\n    triple_list = [('A' -> 'B')]\n}");
    CHECK(r.graph.edges.size() == 1);
    CHECK(count_recovered(r) == 2);
  }
  SUBCASE("unquoted property value") {
    auto r = parse_graph("Graph[name='g'] {\n    entity_list = ['User1'];\n    triple_list = [];\n    User1.review=The film is nice.;\n}");
    REQUIRE(r.graph.properties.size() == 1);
    CHECK(r.graph.properties[0].value == "The film is nice.");
  }
  SUBCASE("single line form") {
    auto r = parse_graph(
        "Graph[name='structure-graph']{node_list=[0, 1, 2, 3]; edge_list=[(0 <-> 1), (0 <-> 2), (0 <-> 3), (1 <-> 2), "
        "(1 <-> 3), (2 <-> 3)];}");
    CHECK(r.diagnostics.empty());
    CHECK(graph_equal(r.graph, complete4()));
  }
  SUBCASE("no skeleton") {
    try {
      parse_graph("hello world");
      FAIL("expected UnparseableGraph");
    } catch (const UnparseableGraph& e) {
      CHECK(e.position().line == 1);
    }
  }
}

TEST_CASE("parser is total on arbitrary bytes") {
  Rng rng(99);
  const std::string alphabet = "Graph[name=']{}();,->< \n\\_list=abc0123\xff\x80";
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    if (rng.bernoulli(0.5)) text = verbalize(test::random_rich_graph(rng.next()));
    const std::size_t mutations = rng.below(20);
    for (std::size_t m = 0; m < mutations; ++m) {
      const char c = alphabet[rng.below(alphabet.size())];
      if (text.empty() || rng.bernoulli(0.5)) {
        text.insert(text.begin() + static_cast<std::ptrdiff_t>(rng.below(text.size() + 1)), c);
      } else {
        text.erase(text.begin() + static_cast<std::ptrdiff_t>(rng.below(text.size())));
      }
    }
    try {
      auto r = parse_graph(text);
      for (const auto& d : r.diagnostics) {
        CHECK(d.position.line >= 1);
        CHECK(d.position.column >= 1);
      }
    } catch (const UnparseableGraph&) {
    }
  }
}

TEST_CASE("edge tokens") {
  Edge e{"0", "1", false};
  CHECK(render_edge(e, GraphKind::structure) == "(0 <-> 1)");
  CHECK(render_edge(e, GraphKind::knowledge) == "('0' <-> '1')");
  auto p = parse_edge("('A' -> 'B')[relation='r', weight=1.5]");
  REQUIRE(p);
  CHECK(p->edge == Edge{"A", "B", true, "r", Rational(3, 2)});
  CHECK(p->kind == GraphKind::knowledge);
  auto q = parse_edge("(3 <-> 4)");
  REQUIRE(q);
  CHECK(q->kind == GraphKind::structure);
  CHECK_FALSE(parse_edge("nonsense"));
}

TEST_CASE("path template baseline") {
  Graph g;
  g.edges = {{"e1", "e2", true, "r1", std::nullopt}, {"e2", "e3", true, "r2", std::nullopt}};
  CHECK(verbalize_path_template(g) ==
        "e1 is connected with e3 within tow hops through e2, and featured relations r1 and r2");
  Graph one;
  one.edges = {{"A", "B", true, "likes", std::nullopt}};
  CHECK(verbalize_path_template(one) == "A is connected with B within one hop, and featured relation likes");
  CHECK(verbalize_path_template(Graph{}).empty());
}

TEST_CASE("bluesman outputs score against the reference") {
  auto ref = parse_graph(test::fixture("data/bluesman_reference.txt")).graph;
  auto baseline = parse_graph(test::fixture("data/bluesman_baseline.txt")).graph;
  auto ours = parse_graph(test::fixture("data/bluesman_model.txt")).graph;
  CHECK(graph_f1(baseline, ref).re.f1 == doctest::Approx(0.25));
  CHECK(graph_f1(ours, ref).re.f1 == doctest::Approx(1.0));
}
