#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphlang/graph.hpp"
#include "graphlang/instructions.hpp"
#include "graphlang/parallel.hpp"
#include "graphlang/record.hpp"

namespace graphlang {

enum class StructureTask {
  connectivity,
  cycle,
  hamilton,
  bipartite_edge,
  shortest_path,
  degree,
  structure_generation,
};

/// Canonical snake_case task name, also the instruction template key.
std::string_view to_string(StructureTask task);
/// Accepts snake_case and kebab-case spellings.
std::optional<StructureTask> parse_structure_task(std::string_view text);

struct WeightRange {
  std::int64_t lo = 1;
  std::int64_t hi = 10;
};

struct Bipartition {
  std::size_t left = 0;
  std::size_t right = 0;
};

/// Parameters of an Erdos-Renyi style random structure graph. Bipartite
/// specs override num_nodes with left + right and only sample undirected
/// cross edges.
struct RandomGraphSpec {
  std::size_t num_nodes = 0;
  double edge_probability = 0.5;
  bool directed = false;
  bool weighted = false;
  WeightRange weight_range;
  std::optional<Bipartition> bipartite;

  /// Throws InvalidArgument when the spec is inconsistent.
  void check() const;
  std::size_t node_count() const { return bipartite ? bipartite->left + bipartite->right : num_nodes; }
};

/// Nodes are named "0".."n-1"; each candidate edge is kept with the given
/// probability. Deterministic in (spec, seed).
Graph gen_random_graph(const RandomGraphSpec& spec, std::uint64_t seed);

bool solve_connectivity(const Graph& graph, const NodeId& from, const NodeId& to);

/// Directed cycles for directed edges, undirected cycles of length >= 3 for
/// undirected edges; self-loops count. Mixed graphs are handled by
/// contracting the undirected forest and searching the remaining arcs.
bool solve_cycle(const Graph& graph);

inline constexpr std::size_t kHamiltonNodeCap = 20;

struct HamiltonResult {
  bool exists = false;
  /// Lexicographically smallest witness (in node order) when exists.
  std::optional<std::vector<NodeId>> path;
};

/// Exact subset DP; throws InstanceTooLarge above `node_cap` nodes.
HamiltonResult solve_hamilton_path(const Graph& graph, std::size_t node_cap = kHamiltonNodeCap);

struct NodeParts {
  std::vector<NodeId> left;
  std::vector<NodeId> right;
};

/// Edge-existence query on a bipartite graph. With explicit parts any
/// intra-part edge raises NotBipartite; without parts the graph must be
/// 2-colourable.
bool solve_bipartite_edge(const Graph& graph, const NodeId& u, const NodeId& v,
                          const std::optional<NodeParts>& parts = std::nullopt);

struct ShortestPath {
  std::vector<NodeId> path;
  Rational weight;
};

/// Minimum-weight path (unweighted edges count 1). Among minimum-weight
/// simple paths the lexicographically smallest node sequence is returned.
ShortestPath solve_shortest_path(const Graph& graph, const NodeId& from, const NodeId& to);

/// Number of edge endpoints equal to `node`: in + out for directed edges,
/// self-loops counted twice.
std::size_t solve_degree(const Graph& graph, const NodeId& node);

/// Gold answer of a structure task; only the fields the task needs are set.
struct StructureAnswer {
  StructureTask task;
  std::optional<bool> verdict;
  std::optional<std::vector<NodeId>> path;
  std::optional<Rational> value;
  std::optional<Graph> graph;

  std::string render() const;
};

inline constexpr int kMaxResamples = 50;

/// Samples a graph, picks query nodes, solves exactly and renders a
/// TaskRecord. Unsatisfiable samples (e.g. unreachable shortest-path pairs)
/// are redrawn up to kMaxResamples times before GenerationFailed.
TaskRecord gen_structure_task(StructureTask task, const RandomGraphSpec& spec, std::uint64_t seed,
                              const InstructionSet& instructions = InstructionSet::defaults());

/// `count` records; record i uses mix_seed(seed, i), so the output does not
/// depend on the execution mode.
std::vector<TaskRecord> gen_structure_batch(StructureTask task, const RandomGraphSpec& spec,
                                            std::uint64_t seed, std::size_t count, Exec exec,
                                            const InstructionSet& instructions = InstructionSet::defaults());

enum class StructureFamily { complete, path, cycle, star, explicit_edges };

/// "complete", "path", "cycle", "star", "explicit"; throws UnsupportedFamily.
StructureFamily parse_structure_family(std::string_view text);

struct StructureTemplate {
  StructureFamily family = StructureFamily::complete;
  std::size_t num_nodes = 0;
  /// Only for explicit_edges; sampled from the seed when empty.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct DescribedGraph {
  std::string description;
  Graph graph;
};

DescribedGraph gen_structure_description_pair(const StructureTemplate& tmpl, std::uint64_t seed);

/// "zero".."twenty", digits beyond.
std::string number_word(std::size_t n);

}  // namespace graphlang
