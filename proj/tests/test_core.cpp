#include <doctest.h>

#include <set>

#include "graphlang/error.hpp"
#include "graphlang/graph.hpp"
#include "graphlang/parallel.hpp"
#include "graphlang/random.hpp"
#include "graphlang/rational.hpp"

using namespace graphlang;

TEST_CASE("rational arithmetic stays normalized") {
  Rational a(2, 4);
  CHECK(a.numerator() == 1);
  CHECK(a.denominator() == 2);
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(a + Rational(1, 3) == Rational(5, 6));
  CHECK(a - Rational(1) == Rational(-1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), InvalidArgument);
}

TEST_CASE("rational rendering and parsing") {
  CHECK(Rational(7).to_string() == "7");
  CHECK(Rational(-5, 2).to_string() == "-2.5");
  CHECK(Rational(1, 3).to_string() == "0.333333");
  CHECK(Rational(2, 3).to_string() == "0.666667");
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("-0.5") == Rational(-1, 2));
  CHECK(Rational::parse("3/9") == Rational(1, 3));
  CHECK_FALSE(Rational::parse("abc"));
  CHECK_FALSE(Rational::parse(""));
  CHECK_FALSE(Rational::parse("1/0"));
}

TEST_CASE("rng draws are deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    auto x = r.between(-3, 3);
    CHECK(x >= -3);
    CHECK(x <= 3);
    double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(mix_seed(5, 0) != mix_seed(5, 1));
  CHECK(mix_seed(5, 1) == mix_seed(5, 1));
}

TEST_CASE("pinned rng stream") {
  // mt19937_64 output is fixed by the standard; the derived draws must not
  // drift between platforms or releases.
  Rng r(5489);
  CHECK(r.next() == 14514284786278117030ull);
  Rng s(7);
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 5; ++i) draws.push_back(s.below(10));
  Rng t(7);
  for (int i = 0; i < 5; ++i) CHECK(t.below(10) == draws[static_cast<std::size_t>(i)]);
}

TEST_CASE("parallel helpers match serial execution") {
  auto f = [](std::size_t i) { return static_cast<double>(i * i) * 0.5; };
  auto s = map_indices<double>(1000, Exec::serial, f);
  auto p = map_indices<double>(1000, Exec::parallel, f);
  CHECK(s == p);
  CHECK(pairwise_sum(s) == doctest::Approx(0.5 * 999.0 * 1000.0 * 1999.0 / 6.0));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("parallel helpers rethrow the lowest failing index") {
  auto body = [](std::size_t i) {
    if (i == 17 || i == 400) throw InvalidArgument("fail " + std::to_string(i));
  };
  for (Exec e : {Exec::serial, Exec::parallel}) {
    try {
      for_each_index(500, e, body);
      FAIL("expected a throw");
    } catch (const InvalidArgument& err) {
      CHECK(std::string(err.what()) == "fail 17");
    }
  }
}

TEST_CASE("node order puts integers first, numerically") {
  std::vector<std::string> v = {"b", "10", "2", "a", "01", "1"};
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return node_less(x, y); });
  CHECK(v == std::vector<std::string>{"1", "2", "10", "01", "a", "b"});
  CHECK(is_integer_name("0"));
  CHECK_FALSE(is_integer_name("007"));
  CHECK_FALSE(is_integer_name("-1"));
}

TEST_CASE("canonicalize orders, deduplicates and adds endpoints") {
  Graph g;
  g.nodes = {" B ", "A", "A"};
  g.edges = {{"C", "A", false, "r", std::nullopt}, {"A", "C", false, "r", std::nullopt}, {"A", "B", true}};
  g.properties = {{"B", "k", "v"}, {"A", "k", "v"}};
  Graph c = canonicalize(g);
  CHECK(c.nodes == std::vector<std::string>{"A", "B", "C"});
  REQUIRE(c.edges.size() == 2);
  CHECK(c.edges[0].target == "B");
  CHECK(c.edges[1].source == "A");
  CHECK(c.edges[1].target == "C");
  CHECK(c.properties[0].node == "A");
  CHECK(canonicalize(c).edges == c.edges);
}

TEST_CASE("graph_equal ignores name, kind and listing order") {
  Graph a, b;
  a.name = "x";
  b.name = "y";
  b.kind = GraphKind::structure;
  a.edges = {{"1", "0", false}, {"2", "1", false}};
  b.edges = {{"1", "2", false}, {"0", "1", false}};
  CHECK(graph_equal(a, b));
  b.edges[0].directed = true;
  CHECK_FALSE(graph_equal(a, b));
}

TEST_CASE("validate reports graph problems") {
  Graph g;
  g.name = "";
  g.nodes = {"A", "A", ""};
  g.edges = {{"A", "Z", true}, {"A", "Z", true}};
  g.properties = {{"A", "bad key", "v"}, {"Q", "ok", "v"}};
  auto report = validate(g);
  std::multiset<std::string> messages;
  for (const auto& v : report) messages.insert(v.message);
  CHECK(messages.count("duplicate node A") == 1);
  CHECK(messages.count("empty node name") == 1);
  CHECK(messages.count("dangling endpoint Z") == 1);
  CHECK(messages.count("1 duplicate edge(s)") == 1);
  CHECK(messages.count("invalid property key 'bad key'") == 1);
  CHECK(messages.count("property on unknown node Q") == 1);
}
