#include "graphlang/graph.hpp"

#include <algorithm>
#include <set>

namespace graphlang {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

template <typename T>
std::strong_ordering compare_optional(const std::optional<T>& a, const std::optional<T>& b) {
  if (a.has_value() != b.has_value()) {
    return a.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (!a) return std::strong_ordering::equal;
  return *a <=> *b;
}

std::strong_ordering edge_compare(const Edge& a, const Edge& b) {
  if (auto c = node_compare(a.source, b.source); c != 0) return c;
  if (auto c = node_compare(a.target, b.target); c != 0) return c;
  if (auto c = a.directed <=> b.directed; c != 0) return c;
  if (auto c = compare_optional(a.relation, b.relation); c != 0) return c;
  return compare_optional(a.weight, b.weight);
}

struct NodeLess {
  bool operator()(const std::string& a, const std::string& b) const { return node_less(a, b); }
};

}  // namespace

std::string_view to_string(GraphKind kind) {
  return kind == GraphKind::structure ? "structure" : "knowledge";
}

bool Graph::has_node(std::string_view node) const {
  return std::find(nodes.begin(), nodes.end(), node) != nodes.end();
}

std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

bool is_integer_name(std::string_view name) {
  if (name.empty() || name.size() > 18) return false;
  if (name.size() > 1 && name[0] == '0') return false;
  return std::all_of(name.begin(), name.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_property_key(std::string_view key) {
  if (key.empty() || (key[0] >= '0' && key[0] <= '9')) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::strong_ordering node_compare(std::string_view a, std::string_view b) {
  bool ai = is_integer_name(a), bi = is_integer_name(b);
  if (ai && bi) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.compare(b) <=> 0;
  }
  if (ai != bi) return ai ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.compare(b) <=> 0;
}

bool node_less(std::string_view a, std::string_view b) { return node_compare(a, b) < 0; }

bool edge_less(const Edge& a, const Edge& b) { return edge_compare(a, b) < 0; }

ValidationReport validate(const Graph& graph) {
  ValidationReport report;
  std::set<std::string, NodeLess> seen;
  for (const auto& raw : graph.nodes) {
    std::string name = trim(raw);
    if (name.empty()) {
      report.push_back({Severity::error, "empty node name"});
      continue;
    }
    if (!seen.insert(name).second) report.push_back({Severity::error, "duplicate node " + name});
  }

  std::set<std::string, NodeLess> dangling;
  for (const auto& e : graph.edges) {
    for (const auto* end : {&e.source, &e.target}) {
      std::string name = trim(*end);
      if (name.empty()) {
        report.push_back({Severity::error, "edge with empty endpoint"});
      } else if (!seen.count(name) && dangling.insert(name).second) {
        report.push_back({Severity::warning, "dangling endpoint " + name});
      }
    }
  }

  Graph edges_only;
  edges_only.edges = graph.edges;
  std::vector<Edge> edges = canonicalize(std::move(edges_only)).edges;
  if (edges.size() != graph.edges.size()) {
    report.push_back({Severity::warning,
                      std::to_string(graph.edges.size() - edges.size()) + " duplicate edge(s)"});
  }

  for (const auto& p : graph.properties) {
    if (!is_property_key(p.key)) {
      report.push_back({Severity::error, "invalid property key '" + p.key + "'"});
    }
    if (!seen.count(trim(p.node))) {
      report.push_back({Severity::error, "property on unknown node " + trim(p.node)});
    }
  }
  return report;
}

Graph canonicalize(Graph graph) {
  std::set<std::string, NodeLess> nodes;
  for (auto& n : graph.nodes) nodes.insert(trim(n));

  for (auto& e : graph.edges) {
    e.source = trim(e.source);
    e.target = trim(e.target);
    if (!e.directed && node_less(e.target, e.source)) std::swap(e.source, e.target);
    nodes.insert(e.source);
    nodes.insert(e.target);
  }
  std::sort(graph.edges.begin(), graph.edges.end(), edge_less);
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());

  for (auto& p : graph.properties) {
    p.node = trim(p.node);
    nodes.insert(p.node);
  }
  std::sort(graph.properties.begin(), graph.properties.end(),
            [](const NodeProperty& a, const NodeProperty& b) {
              if (auto c = node_compare(a.node, b.node); c != 0) return c < 0;
              return std::tie(a.key, a.value) < std::tie(b.key, b.value);
            });
  graph.properties.erase(std::unique(graph.properties.begin(), graph.properties.end()),
                         graph.properties.end());

  graph.nodes.assign(nodes.begin(), nodes.end());
  return graph;
}

bool graph_equal(const Graph& a, const Graph& b) {
  Graph ca = canonicalize(a);
  Graph cb = canonicalize(b);
  return ca.nodes == cb.nodes && ca.edges == cb.edges && ca.properties == cb.properties;
}

}  // namespace graphlang
