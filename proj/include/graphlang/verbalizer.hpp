#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphlang/error.hpp"
#include "graphlang/graph.hpp"

namespace graphlang {

/// Which list keywords to emit: node_list/edge_list or entity_list/triple_list.
enum class Vocabulary { node, entity };

struct VerbalStyle {
  std::string graph_name = "graph";
  Vocabulary vocabulary = Vocabulary::entity;
  bool include_properties = true;

  /// Style derived from the graph itself: its name, and the vocabulary that
  /// matches its kind.
  static VerbalStyle for_graph(const Graph& graph);
};

/// One parser note. `recovered` is set when the parser repaired structural
/// damage (the resulting graph differs from a literal reading of the text);
/// lexical leniencies such as unescaped interior apostrophes are reported
/// with `recovered == false`.
struct ParseDiagnostic {
  SourcePosition position;
  std::string message;
  bool recovered = true;
};

struct ParseResult {
  Graph graph;
  std::vector<ParseDiagnostic> diagnostics;

  std::size_t recovered_count() const;
};

/// Renders the code-like graph language. The graph is canonicalized first,
/// so the output is a pure function of the graph's canonical form.
///
///   Graph[name='g'] {
///       entity_list = ['A', 'B'];
///       triple_list = [('A' -> 'B')[relation='r']];
///       'A'.key='value';
///   }
std::string verbalize(const Graph& graph, const VerbalStyle& style);
std::string verbalize(const Graph& graph);

/// Parses the graph language, repairing what it can. Throws UnparseableGraph
/// when no `Graph[...] { ... }` skeleton can be located.
ParseResult parse_graph(std::string_view text);

/// Node token as it appears in lists: bare for integer names of structure
/// graphs, single-quoted otherwise.
std::string render_node(std::string_view name, GraphKind kind);

/// Edge token including its attribute group, e.g. `('A' -> 'B')[relation='r']`.
std::string render_edge(const Edge& edge, GraphKind kind);

/// Parses a single edge token as produced by render_edge. Bare endpoints mark
/// the edge as coming from a structure graph.
struct ParsedEdge {
  Edge edge;
  GraphKind kind;
};
std::optional<ParsedEdge> parse_edge(std::string_view text);

/// Backslash-escapes `\`, `'`, newline and carriage return.
std::string escape_quoted(std::string_view text);

/// Baseline natural-language rendering: one sentence per 2-hop path (or per
/// leftover single triple), joined by newlines.
std::string verbalize_path_template(const Graph& graph);

}  // namespace graphlang
