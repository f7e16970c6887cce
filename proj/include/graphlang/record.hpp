#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "graphlang/graph.hpp"

namespace graphlang {

/// Task clusters. Each cluster fixes how a record's prompt and target are
/// composed from instruction, graph and passage.
enum class Cluster { structure, caption, graph_qa, node_cls, link_pred, relevance, recsys, ie, graph_gen };

std::string_view to_string(Cluster cluster);
std::optional<Cluster> parse_cluster(std::string_view text);

/// Graph generation clusters (IE, Graph Gen.) produce a graph as the target;
/// every other cluster reasons over a graph given in the prompt.
bool is_generation_cluster(Cluster cluster);

using Meta = std::map<std::string, std::string>;

/// One raw example: instruction, optional graph, optional passage, answer.
struct TaskRecord {
  std::string task;
  Cluster cluster = Cluster::structure;
  std::string instruction;
  std::optional<Graph> graph;
  std::optional<std::string> passage;
  std::string answer;
  Meta meta;
};

/// An assembled instruction example: the prompt fed to the model and the
/// expected output, plus the raw components they were built from.
struct CorpusRecord {
  std::string task;
  Cluster cluster = Cluster::structure;
  std::string instruction;
  std::optional<std::string> graph_text;
  std::optional<std::string> passage;
  std::string prompt;
  std::string target;
  Meta meta;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

}  // namespace graphlang
