#include "graphlang/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "graphlang/error.hpp"
#include "graphlang/random.hpp"

namespace graphlang {
namespace {

enum class Target { answer, passage, graph };

struct Composition {
  bool graph_in_prompt;
  bool passage_in_prompt;
  bool passage_required;
  Target target;
};

Composition composition_of(Cluster cluster) {
  switch (cluster) {
    case Cluster::structure: return {true, false, false, Target::answer};
    case Cluster::caption: return {true, false, true, Target::passage};
    case Cluster::ie:
    case Cluster::graph_gen: return {false, true, true, Target::graph};
    default: return {true, true, false, Target::answer};
  }
}

constexpr std::string_view kFence = "```";

}  // namespace

CorpusRecord assemble(const TaskRecord& record, const std::optional<VerbalStyle>& style) {
  const Composition comp = composition_of(record.cluster);
  const std::string cluster(to_string(record.cluster));
  if ((comp.graph_in_prompt || comp.target == Target::graph) && !record.graph) {
    throw MissingComponent(cluster + " record '" + record.task + "' needs a graph");
  }
  if (comp.passage_required && !record.passage) {
    throw MissingComponent(cluster + " record '" + record.task + "' needs a passage");
  }

  CorpusRecord out;
  out.task = record.task;
  out.cluster = record.cluster;
  out.instruction = record.instruction;
  out.passage = record.passage;
  out.meta = record.meta;
  if (record.graph) {
    out.graph_text = verbalize(*record.graph, style.value_or(VerbalStyle::for_graph(*record.graph)));
  }

  out.prompt = record.instruction;
  if (comp.graph_in_prompt) {
    out.prompt += "\n";
    out.prompt += kFence;
    out.prompt += "\n" + *out.graph_text + "\n";
    out.prompt += kFence;
    out.prompt += "\n";
  }
  if (comp.passage_in_prompt && record.passage) {
    if (out.prompt.empty() || out.prompt.back() != '\n') out.prompt += "\n";
    out.prompt += *record.passage;
  }

  switch (comp.target) {
    case Target::answer: out.target = record.answer; break;
    case Target::passage: out.target = *record.passage; break;
    case Target::graph: out.target = *out.graph_text; break;
  }
  return out;
}

TaskRecord to_task_record(const CorpusRecord& record) {
  TaskRecord out;
  out.task = record.task;
  out.cluster = record.cluster;
  out.instruction = record.instruction;
  out.passage = record.passage;
  out.answer = record.target;
  out.meta = record.meta;
  if (record.graph_text) {
    ParseResult parsed = parse_graph(*record.graph_text);
    out.graph = std::move(parsed.graph);
  }
  return out;
}

std::optional<std::string> extract_graph_block(std::string_view prompt) {
  const std::string open = std::string(kFence) + "\n";
  const std::string close = "\n" + std::string(kFence);
  std::size_t b = prompt.find(open);
  if (b == std::string_view::npos) return std::nullopt;
  b += open.size();
  std::size_t e = prompt.find(close, b);
  if (e == std::string_view::npos) return std::nullopt;
  return std::string(prompt.substr(b, e - b));
}

Graph khop_subgraph(const Graph& graph, const std::vector<NodeId>& centers, std::size_t k) {
  const Graph g = canonicalize(graph);
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const auto& e : g.edges) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::unordered_map<std::string, std::size_t> dist;
  std::queue<std::string> q;
  for (const auto& c : centers) {
    std::string name = trim(c);
    if (!g.has_node(name)) throw UnknownNode(c);
    if (dist.emplace(name, 0).second) q.push(name);
  }
  while (!q.empty()) {
    std::string x = q.front();
    q.pop();
    const std::size_t d = dist[x];
    if (d == k) continue;
    for (const auto& y : adj[x]) {
      if (dist.emplace(y, d + 1).second) q.push(y);
    }
  }

  Graph sub;
  sub.name = g.name;
  sub.kind = g.kind;
  for (const auto& n : g.nodes) {
    if (dist.count(n)) sub.nodes.push_back(n);
  }
  for (const auto& e : g.edges) {
    if (dist.count(e.source) && dist.count(e.target)) sub.edges.push_back(e);
  }
  for (const auto& p : g.properties) {
    if (dist.count(p.node)) sub.properties.push_back(p);
  }
  return canonicalize(std::move(sub));
}

std::vector<Graph> table_to_graphs(const std::vector<std::string>& header,
                                   const std::vector<std::vector<std::string>>& rows) {
  std::vector<Graph> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw ArityMismatch("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                          " cells, header has " + std::to_string(header.size()));
    }
    if (row.empty()) throw ArityMismatch("table has no columns");
    const std::string subject = trim(row[0]);
    if (subject.empty()) throw InvalidArgument("row " + std::to_string(r) + " has an empty subject cell");
    Graph g;
    g.name = "table-row-" + std::to_string(r);
    g.kind = GraphKind::knowledge;
    g.nodes.push_back(subject);
    for (std::size_t c = 1; c < row.size(); ++c) {
      std::string cell = trim(row[c]);
      if (cell.empty()) continue;
      g.edges.push_back(Edge{subject, cell, true, trim(header[c]), std::nullopt});
    }
    out.push_back(canonicalize(std::move(g)));
  }
  return out;
}

Rational jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t total = a.size() + b.size() - common;
  if (total == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(common), static_cast<std::int64_t>(total));
}

Graph build_collaboration_graph(const UserItemPrefs& prefs, std::size_t k, Exec exec) {
  if (k == 0) throw InvalidArgument("collaboration graph needs k >= 1");
  std::vector<std::string> users;
  for (const auto& [user, items] : prefs) {
    if (items.empty()) throw InvalidArgument("user " + user + " has no items");
    users.push_back(user);
  }
  std::sort(users.begin(), users.end(), [](const auto& a, const auto& b) { return node_less(a, b); });

  // Item sets as sorted integer ids for a cheap merge-intersection.
  std::unordered_map<std::string, int> item_ids;
  std::vector<std::vector<int>> items(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    for (const auto& it : prefs.at(users[u])) {
      auto [pos, _] = item_ids.emplace(it, static_cast<int>(item_ids.size()));
      items[u].push_back(pos->second);
    }
    std::sort(items[u].begin(), items[u].end());
  }

  struct Neighbor {
    Rational similarity;
    std::size_t user;
  };
  auto top = map_indices<std::vector<Neighbor>>(users.size(), exec, [&](std::size_t u) {
    std::vector<Neighbor> cands;
    for (std::size_t v = 0; v < users.size(); ++v) {
      if (v == u) continue;
      std::vector<int> common;
      std::set_intersection(items[u].begin(), items[u].end(), items[v].begin(), items[v].end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      const auto uni = static_cast<std::int64_t>(items[u].size() + items[v].size() - common.size());
      cands.push_back({Rational(static_cast<std::int64_t>(common.size()), uni), v});
    }
    auto better = [](const Neighbor& a, const Neighbor& b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity : a.user < b.user;
    };
    const std::size_t keep = std::min(k, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(), better);
    cands.resize(keep);
    return cands;
  });

  Graph g;
  g.name = "collaboration-graph";
  g.kind = GraphKind::knowledge;
  g.nodes = users;
  for (std::size_t u = 0; u < users.size(); ++u) {
    for (const auto& n : top[u]) {
      g.edges.push_back(Edge{users[u], users[n.user], false, std::nullopt, n.similarity});
    }
    std::string joined;
    for (const auto& it : prefs.at(users[u])) {
      if (!joined.empty()) joined += ", ";
      joined += it;
    }
    g.properties.push_back({users[u], "items", joined});
  }
  return canonicalize(std::move(g));
}

std::vector<std::size_t> sample_indices(std::size_t n, const SamplingRule& rule, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (rule.policy == SamplingPolicy::all) return idx;
  if (rule.target_count == 0) throw InvalidArgument("sampling target count must be >= 1");
  Rng rng(seed);
  if (rule.policy == SamplingPolicy::down) {
    if (rule.target_count >= n) return idx;
    for (std::size_t i = 0; i < rule.target_count; ++i) {
      std::swap(idx[i], idx[i + rng.below(n - i)]);
    }
    idx.resize(rule.target_count);
    std::sort(idx.begin(), idx.end());
    return idx;
  }
  if (n == 0) return idx;
  while (idx.size() < rule.target_count) idx.push_back(rng.below(n));
  return idx;
}

}  // namespace graphlang
