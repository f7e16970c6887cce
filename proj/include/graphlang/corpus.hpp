#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "graphlang/graph.hpp"
#include "graphlang/parallel.hpp"
#include "graphlang/record.hpp"
#include "graphlang/verbalizer.hpp"

namespace graphlang {

/// Builds prompt and target from a record according to its cluster:
///
///   Structure                          prompt = [I, C]     target = A
///   Caption                            prompt = [I, C]     target = P
///   Graph QA, Node CLS, Link Pred.,
///   Relevance, RecSys                  prompt = [I, C, P]  target = A
///   IE, Graph Gen.                     prompt = [I, P]     target = C
///
/// The graph is fenced by ``` lines. Throws MissingComponent when the
/// cluster needs a graph or passage the record lacks.
CorpusRecord assemble(const TaskRecord& record, const std::optional<VerbalStyle>& style = std::nullopt);

/// Inverse of assemble for ingestion: graph from graph_text, answer from
/// target.
TaskRecord to_task_record(const CorpusRecord& record);

/// Contents of the first ``` fenced block, without the fences.
std::optional<std::string> extract_graph_block(std::string_view prompt);

/// Induced subgraph on nodes within undirected hop distance <= k of any
/// center.
Graph khop_subgraph(const Graph& graph, const std::vector<NodeId>& centers, std::size_t k);

/// One knowledge graph per table row: the first cell is the subject and
/// every other non-empty cell becomes (subject -> cell)[relation=column].
std::vector<Graph> table_to_graphs(const std::vector<std::string>& header,
                                   const std::vector<std::vector<std::string>>& rows);

using UserItemPrefs = std::map<std::string, std::set<std::string>>;

/// |A n B| / |A u B|, exact.
Rational jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Undirected user graph: every user links to its top-k most Jaccard-similar
/// users (ties by user order, zero similarity excluded), weighted by the
/// similarity. Each user's items are attached as an `items` property.
Graph build_collaboration_graph(const UserItemPrefs& prefs, std::size_t k, Exec exec = Exec::parallel);

enum class SamplingPolicy { up, down, all };

struct SamplingRule {
  SamplingPolicy policy = SamplingPolicy::all;
  std::size_t target_count = 0;
};

/// Indices into a list of n records selected by the rule. `down` keeps the
/// original relative order; `up` is every index followed by draws with
/// replacement.
std::vector<std::size_t> sample_indices(std::size_t n, const SamplingRule& rule, std::uint64_t seed);

template <typename T>
std::vector<T> sample_split(const std::vector<T>& records, const SamplingRule& rule, std::uint64_t seed) {
  std::vector<T> out;
  for (std::size_t i : sample_indices(records.size(), rule, seed)) out.push_back(records[i]);
  return out;
}

}  // namespace graphlang
