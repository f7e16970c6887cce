#include "graphlang/record.hpp"

#include <array>
#include <cctype>
#include <string>
#include <utility>

namespace graphlang {
namespace {

constexpr std::array<std::pair<Cluster, std::string_view>, 9> kClusterNames{{
    {Cluster::structure, "Structure"},
    {Cluster::caption, "Caption"},
    {Cluster::graph_qa, "Graph QA"},
    {Cluster::node_cls, "Node CLS"},
    {Cluster::link_pred, "Link Pred."},
    {Cluster::relevance, "Relevance"},
    {Cluster::recsys, "RecSys"},
    {Cluster::ie, "IE"},
    {Cluster::graph_gen, "Graph Gen."},
}};

// "Graph QA", "graph_qa" and "graph-qa" all fold to "graphqa".
std::string fold(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
  }
  return out;
}

}  // namespace

std::string_view to_string(Cluster cluster) {
  for (const auto& [c, name] : kClusterNames) {
    if (c == cluster) return name;
  }
  return "Structure";
}

std::optional<Cluster> parse_cluster(std::string_view text) {
  for (const auto& [c, name] : kClusterNames) {
    if (fold(name) == fold(text)) return c;
  }
  return std::nullopt;
}

bool is_generation_cluster(Cluster cluster) {
  return cluster == Cluster::ie || cluster == Cluster::graph_gen;
}

}  // namespace graphlang
