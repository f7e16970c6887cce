#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphlang/rational.hpp"

namespace graphlang {

/// Node (entity) name. Compared byte-wise after trimming ASCII whitespace.
using NodeId = std::string;

/// Controls the list vocabulary a graph is rendered with and whether integer
/// node names are emitted bare.
enum class GraphKind { structure, knowledge };

std::string_view to_string(GraphKind kind);

struct Edge {
  NodeId source;
  NodeId target;
  bool directed = false;
  std::optional<std::string> relation;
  std::optional<Rational> weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct NodeProperty {
  NodeId node;
  std::string key;
  std::string value;

  friend bool operator==(const NodeProperty&, const NodeProperty&) = default;
  friend auto operator<=>(const NodeProperty&, const NodeProperty&) = default;
};

/// A task graph: node set, edge multiset (possibly mixing directed and
/// undirected edges), optional relations and weights, textual properties.
struct Graph {
  std::string name = "graph";
  GraphKind kind = GraphKind::knowledge;
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  std::vector<NodeProperty> properties;

  bool has_node(std::string_view node) const;
};

enum class Severity { error, warning };

struct Violation {
  Severity severity;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Reports every broken invariant. Dangling edge endpoints are warnings so
/// that model-generated graphs can still be loaded and repaired.
ValidationReport validate(const Graph& graph);

/// Trims names, adds dangling endpoints (and property owners) to the node
/// set, orders undirected endpoints, sorts nodes/edges/properties and drops
/// duplicates. Idempotent.
Graph canonicalize(Graph graph);

/// Structural equality of the canonical forms; the graph name and kind are
/// not compared.
bool graph_equal(const Graph& a, const Graph& b);

/// Total order on node names: canonical non-negative integers sort
/// numerically and before everything else; other names compare byte-wise.
bool node_less(std::string_view a, std::string_view b);
std::strong_ordering node_compare(std::string_view a, std::string_view b);

/// Canonical edge order: (source, target, directed, relation, weight).
bool edge_less(const Edge& a, const Edge& b);

/// `0` or a digit string without leading zeros.
bool is_integer_name(std::string_view name);

/// Letters, digits and underscore, not starting with a digit.
bool is_property_key(std::string_view key);

std::string trim(std::string_view text);

}  // namespace graphlang
