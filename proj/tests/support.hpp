#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphlang/graph.hpp"
#include "graphlang/io.hpp"
#include "graphlang/random.hpp"

namespace graphlang::test {

inline std::string fixture(const std::string& relative) {
  return read_text(std::string(GRAPHLANG_TEST_DIR) + "/" + relative);
}

inline std::string fixture_path(const std::string& relative) {
  return std::string(GRAPHLANG_TEST_DIR) + "/" + relative;
}

// Names that stress quoting: apostrophes, backslashes, unicode, separators.
inline std::string random_name(Rng& rng) {
  static const std::vector<std::string> parts = {
      "Bluesman", "B'z",  "Tak Matsumoto", "O'Brien", "back\\slash", "Zürich", "東京", "naïve café",
      "a, b",     "x->y", "[tag]",         "semi;colon", "{brace}",  "quote\"d", "tab\there", "émoji 🎸"};
  std::string name = parts[rng.below(parts.size())];
  if (rng.bernoulli(0.7)) name += " " + std::to_string(rng.below(1000));
  return name;
}

inline Rational random_weight(Rng& rng) {
  switch (rng.below(3)) {
    case 0: return Rational(rng.between(-20, 100));
    case 1: return Rational(rng.between(-5000, 5000), 1000);
    default: return Rational(rng.between(1, 999999), 1000000);
  }
}

// Random graph with every feature the language supports.
inline Graph random_rich_graph(std::uint64_t seed) {
  Rng rng(seed);
  Graph g;
  const bool structure = rng.bernoulli(0.3);
  g.kind = structure ? GraphKind::structure : GraphKind::knowledge;
  g.name = structure ? "structure-graph" : (rng.bernoulli(0.5) ? "knowledge-graph" : "g'" + random_name(rng));
  const std::size_t n = rng.below(9);
  for (std::size_t i = 0; i < n; ++i) {
    g.nodes.push_back(structure && rng.bernoulli(0.8) ? std::to_string(i) : random_name(rng));
  }
  if (!g.nodes.empty()) {
    const std::size_t m = rng.below(3 * n + 1);
    const bool weighted = rng.bernoulli(0.4);
    const bool relations = !structure && rng.bernoulli(0.8);
    for (std::size_t i = 0; i < m; ++i) {
      Edge e;
      e.source = rng.pick(g.nodes);
      e.target = rng.bernoulli(0.1) ? random_name(rng) : rng.pick(g.nodes);
      e.directed = rng.bernoulli(0.6);
      if (relations) e.relation = rng.bernoulli(0.2) ? "it's \\ odd" : random_name(rng);
      if (weighted) e.weight = random_weight(rng);
      g.edges.push_back(e);
    }
    const std::size_t props = rng.below(4);
    for (std::size_t i = 0; i < props; ++i) {
      static const std::vector<std::string> keys = {"review", "label", "year_2020", "_x", "Items"};
      static const std::vector<std::string> values = {"The film is nice.", "it's fine", "line\nbreak",
                                                      "back\\slash", "", "ünï ✓", "a = b; c"};
      g.properties.push_back({rng.pick(g.nodes), rng.pick(keys), rng.pick(values)});
    }
  }
  return canonicalize(std::move(g));
}

}  // namespace graphlang::test
