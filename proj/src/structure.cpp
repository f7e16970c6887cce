#include "graphlang/structure.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "graphlang/error.hpp"
#include "graphlang/random.hpp"
#include "graphlang/verbalizer.hpp"

namespace graphlang {
namespace {

constexpr std::array<std::pair<StructureTask, std::string_view>, 7> kTaskNames{{
    {StructureTask::connectivity, "connectivity"},
    {StructureTask::cycle, "cycle"},
    {StructureTask::hamilton, "hamilton"},
    {StructureTask::bipartite_edge, "bipartite_edge"},
    {StructureTask::shortest_path, "shortest_path"},
    {StructureTask::degree, "degree"},
    {StructureTask::structure_generation, "structure_generation"},
}};

// Dense ids in canonical node order, so id order == node_less order.
class NodeIndex {
 public:
  explicit NodeIndex(const Graph& canonical) : names_(canonical.nodes) {
    for (std::size_t i = 0; i < names_.size(); ++i) ids_.emplace(names_[i], i);
  }
  std::size_t size() const { return names_.size(); }
  const NodeId& name(std::size_t i) const { return names_[i]; }
  std::size_t at(const NodeId& node) const {
    auto it = ids_.find(trim(node));
    if (it == ids_.end()) throw UnknownNode(node);
    return it->second;
  }
  bool contains(const NodeId& node) const { return ids_.count(trim(node)) > 0; }

 private:
  std::vector<NodeId> names_;
  std::unordered_map<std::string, std::size_t> ids_;
};

// Out-neighbour lists; undirected edges contribute both arcs.
std::vector<std::vector<std::size_t>> out_arcs(const Graph& g, const NodeIndex& idx) {
  std::vector<std::vector<std::size_t>> adj(idx.size());
  for (const auto& e : g.edges) {
    std::size_t a = idx.at(e.source), b = idx.at(e.target);
    adj[a].push_back(b);
    if (!e.directed && a != b) adj[b].push_back(a);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

std::string join_nodes(const std::vector<NodeId>& nodes, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += sep;
    out += nodes[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(StructureTask task) {
  for (const auto& [t, name] : kTaskNames) {
    if (t == task) return name;
  }
  return "connectivity";
}

std::optional<StructureTask> parse_structure_task(std::string_view text) {
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), '-', '_');
  for (const auto& [t, name] : kTaskNames) {
    if (name == normalized) return t;
  }
  return std::nullopt;
}

void RandomGraphSpec::check() const {
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw InvalidArgument("edge probability must be in [0, 1]");
  }
  if (weighted && weight_range.hi < weight_range.lo) throw InvalidArgument("empty weight range");
  if (bipartite && directed) throw InvalidArgument("bipartite graphs are undirected");
  if (node_count() > 100000) throw InvalidArgument("too many nodes");
}

Graph gen_random_graph(const RandomGraphSpec& spec, std::uint64_t seed) {
  spec.check();
  Rng rng(seed);
  Graph g;
  g.name = "structure-graph";
  g.kind = GraphKind::structure;
  const std::size_t n = spec.node_count();
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back(std::to_string(i));

  auto add = [&](std::size_t a, std::size_t b, bool directed) {
    if (!rng.bernoulli(spec.edge_probability)) return;
    Edge e{std::to_string(a), std::to_string(b), directed, std::nullopt, std::nullopt};
    if (spec.weighted) e.weight = Rational(rng.between(spec.weight_range.lo, spec.weight_range.hi));
    g.edges.push_back(std::move(e));
  };

  if (spec.bipartite) {
    const std::size_t left = spec.bipartite->left;
    for (std::size_t a = 0; a < left; ++a) {
      for (std::size_t b = left; b < n; ++b) add(a, b, false);
    }
  } else if (spec.directed) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b) add(a, b, true);
      }
    }
  } else {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) add(a, b, false);
    }
  }
  return canonicalize(std::move(g));
}

bool solve_connectivity(const Graph& graph, const NodeId& from, const NodeId& to) {
  const Graph g = canonicalize(graph);
  NodeIndex idx(g);
  const std::size_t s = idx.at(from), t = idx.at(to);
  if (s == t) return true;
  auto adj = out_arcs(g, idx);
  std::vector<bool> seen(idx.size(), false);
  std::vector<std::size_t> stack{s};
  seen[s] = true;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t y : adj[x]) {
      if (y == t) return true;
      if (!seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return false;
}

bool solve_cycle(const Graph& graph) {
  const Graph g = canonicalize(graph);
  NodeIndex idx(g);
  DisjointSets forest(idx.size());

  // Undirected part: parallel edges between the same pair are one edge.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : g.edges) {
    if (e.directed) continue;
    std::size_t a = idx.at(e.source), b = idx.at(e.target);
    if (a == b) return true;
    pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (auto [a, b] : pairs) {
    if (!forest.unite(a, b)) return true;
  }

  // Directed arcs between undirected trees. An arc inside one tree closes a
  // cycle through the tree path; otherwise look for a directed cycle in the
  // contracted digraph.
  std::vector<std::vector<std::size_t>> arcs(idx.size());
  for (const auto& e : g.edges) {
    if (!e.directed) continue;
    std::size_t a = forest.find(idx.at(e.source)), b = forest.find(idx.at(e.target));
    if (a == b) return true;
    arcs[a].push_back(b);
  }

  enum : char { white, grey, black };
  std::vector<char> colour(idx.size(), white);
  for (std::size_t root = 0; root < idx.size(); ++root) {
    if (colour[root] != white) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = grey;
    while (!stack.empty()) {
      auto& [x, next] = stack.back();
      if (next < arcs[x].size()) {
        std::size_t y = arcs[x][next++];
        if (colour[y] == grey) return true;
        if (colour[y] == white) {
          colour[y] = grey;
          stack.emplace_back(y, 0);
        }
      } else {
        colour[x] = black;
        stack.pop_back();
      }
    }
  }
  return false;
}

HamiltonResult solve_hamilton_path(const Graph& graph, std::size_t node_cap) {
  const Graph g = canonicalize(graph);
  NodeIndex idx(g);
  const std::size_t n = idx.size();
  if (n > node_cap || n > 24) {
    throw InstanceTooLarge("Hamilton path search is capped at " + std::to_string(node_cap) + " nodes, got " +
                           std::to_string(n));
  }
  if (n == 0) return {true, std::vector<NodeId>{}};

  std::vector<std::uint32_t> out(n, 0);
  DisjointSets weak(n);
  for (const auto& e : g.edges) {
    std::size_t a = idx.at(e.source), b = idx.at(e.target);
    weak.unite(a, b);
    if (a == b) continue;
    out[a] |= 1u << b;
    if (!e.directed) out[b] |= 1u << a;
  }
  for (std::size_t v = 1; v < n; ++v) {
    if (weak.find(v) != weak.find(0)) return {false, std::nullopt};
  }

  // starts[mask] has bit v set iff some path covers exactly `mask` and
  // begins at v.
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<std::uint32_t> starts(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    if (std::has_single_bit(mask)) {
      starts[mask] = mask;
      continue;
    }
    std::uint32_t result = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      const unsigned v = static_cast<unsigned>(std::countr_zero(rest));
      if (out[v] & starts[mask ^ (1u << v)]) result |= 1u << v;
    }
    starts[mask] = result;
  }
  if (starts[full] == 0) return {false, std::nullopt};

  std::vector<NodeId> path;
  std::uint32_t mask = full;
  std::uint32_t candidates = starts[full];
  while (mask) {
    const unsigned v = static_cast<unsigned>(std::countr_zero(candidates));
    path.push_back(idx.name(v));
    mask ^= 1u << v;
    if (mask) candidates = starts[mask] & out[v];
  }
  return {true, std::move(path)};
}

bool solve_bipartite_edge(const Graph& graph, const NodeId& u, const NodeId& v,
                          const std::optional<NodeParts>& parts) {
  const Graph g = canonicalize(graph);
  NodeIndex idx(g);
  const std::size_t a = idx.at(u), b = idx.at(v);

  std::vector<int> side(idx.size(), -1);
  if (parts) {
    for (const auto& n : parts->left) side[idx.at(n)] = 0;
    for (const auto& n : parts->right) {
      std::size_t i = idx.at(n);
      if (side[i] == 0) throw NotBipartite("node " + n + " is in both parts");
      side[i] = 1;
    }
    for (std::size_t i = 0; i < side.size(); ++i) {
      if (side[i] < 0) throw InvalidArgument("node " + idx.name(i) + " is in neither part");
    }
    for (const auto& e : g.edges) {
      if (side[idx.at(e.source)] == side[idx.at(e.target)]) {
        throw NotBipartite("intra-part edge " + render_edge(e, g.kind));
      }
    }
  } else {
    std::vector<std::vector<std::size_t>> und(idx.size());
    for (const auto& e : g.edges) {
      std::size_t x = idx.at(e.source), y = idx.at(e.target);
      und[x].push_back(y);
      und[y].push_back(x);
    }
    for (std::size_t root = 0; root < idx.size(); ++root) {
      if (side[root] >= 0) continue;
      side[root] = 0;
      std::queue<std::size_t> q;
      q.push(root);
      while (!q.empty()) {
        std::size_t x = q.front();
        q.pop();
        for (std::size_t y : und[x]) {
          if (side[y] < 0) {
            side[y] = 1 - side[x];
            q.push(y);
          } else if (side[y] == side[x]) {
            throw NotBipartite("graph has an odd cycle through node " + idx.name(y));
          }
        }
      }
    }
  }

  return std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) {
    std::size_t x = idx.at(e.source), y = idx.at(e.target);
    return (x == a && y == b) || (x == b && y == a);
  });
}

ShortestPath solve_shortest_path(const Graph& graph, const NodeId& from, const NodeId& to) {
  const Graph g = canonicalize(graph);
  NodeIndex idx(g);
  const std::size_t s = idx.at(from), t = idx.at(to);
  const std::size_t n = idx.size();

  // Cheapest arc per ordered pair; reverse lists for the Dijkstra from t.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> fwd(n), rev(n);
  {
    std::map<std::pair<std::size_t, std::size_t>, Rational> best;
    auto relax = [&](std::size_t a, std::size_t b, Rational w) {
      auto [it, inserted] = best.emplace(std::make_pair(a, b), w);
      if (!inserted && w < it->second) it->second = w;
    };
    for (const auto& e : g.edges) {
      Rational w = e.weight.value_or(Rational(1));
      if (w < Rational(0)) throw NegativeWeight("negative weight on " + render_edge(e, g.kind));
      std::size_t a = idx.at(e.source), b = idx.at(e.target);
      relax(a, b, w);
      if (!e.directed) relax(b, a, w);
    }
    for (const auto& [key, w] : best) {
      fwd[key.first].emplace_back(key.second, w);
      rev[key.second].emplace_back(key.first, w);
    }
  }

  std::vector<std::optional<Rational>> dist(n);
  using Item = std::pair<Rational, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[t] = Rational(0);
  pq.emplace(Rational(0), t);
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (*dist[x] < d) continue;
    for (const auto& [y, w] : rev[x]) {
      Rational nd = d + w;
      if (!dist[y] || nd < *dist[y]) {
        dist[y] = nd;
        pq.emplace(nd, y);
      }
    }
  }
  if (!dist[s]) throw Unreachable("node " + idx.name(t) + " is not reachable from node " + idx.name(s));

  // Depth-first over tight arcs in ascending neighbour order; the first
  // simple path reaching t is the lexicographically smallest optimum.
  std::vector<bool> on_path(n, false);
  std::vector<std::size_t> path{s};
  on_path[s] = true;
  std::function<bool(std::size_t)> extend = [&](std::size_t x) {
    if (x == t) return true;
    for (const auto& [y, w] : fwd[x]) {
      if (on_path[y] || !dist[y] || *dist[x] != w + *dist[y]) continue;
      on_path[y] = true;
      path.push_back(y);
      if (extend(y)) return true;
      path.pop_back();
      on_path[y] = false;
    }
    return false;
  };
  extend(s);

  ShortestPath result;
  result.weight = *dist[s];
  for (std::size_t i : path) result.path.push_back(idx.name(i));
  return result;
}

std::size_t solve_degree(const Graph& graph, const NodeId& node) {
  const std::string name = trim(node);
  const Graph g = canonicalize(graph);
  if (!g.has_node(name)) throw UnknownNode(node);
  std::size_t degree = 0;
  for (const auto& e : g.edges) {
    degree += (e.source == name) + (e.target == name);
  }
  return degree;
}

std::string StructureAnswer::render() const {
  switch (task) {
    case StructureTask::shortest_path:
      return "The shortest path is " + join_nodes(path.value_or(std::vector<NodeId>{}), " -> ") +
             " with a total weight of " + value.value_or(Rational(0)).to_string() + ".";
    case StructureTask::degree:
      return "The answer is " + value.value_or(Rational(0)).to_string() + ".";
    case StructureTask::structure_generation:
      return graph ? verbalize(*graph, VerbalStyle::for_graph(*graph)) : std::string();
    default:
      return verdict.value_or(false) ? "The answer is yes." : "The answer is no.";
  }
}

namespace {

std::string describe_edges(const Graph& g) {
  if (g.edges.empty()) return "no edges";
  std::string out = "the edges ";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (i) out += ", ";
    out += "(" + g.edges[i].source + ", " + g.edges[i].target + ")";
  }
  return out;
}

TaskRecord render_structure_record(StructureTask task, const Graph& g, const StructureAnswer& answer,
                                   Meta vars, const InstructionSet& instructions) {
  TaskRecord rec;
  rec.task = std::string(to_string(task));
  rec.cluster = task == StructureTask::structure_generation ? Cluster::graph_gen : Cluster::structure;
  rec.instruction = instructions.render(rec.task, vars);
  rec.graph = g;
  rec.answer = answer.render();
  rec.meta = std::move(vars);
  return rec;
}

}  // namespace

TaskRecord gen_structure_task(StructureTask task, const RandomGraphSpec& spec, std::uint64_t seed,
                              const InstructionSet& instructions) {
  spec.check();
  const std::size_t n = spec.node_count();
  switch (task) {
    case StructureTask::bipartite_edge:
      if (!spec.bipartite || spec.bipartite->left == 0 || spec.bipartite->right == 0) {
        throw InvalidArgument("bipartite_edge needs a bipartite spec with two non-empty parts");
      }
      break;
    case StructureTask::shortest_path:
      if (!spec.weighted) throw InvalidArgument("shortest_path needs a weighted spec");
      if (n < 2) throw InvalidArgument("shortest_path needs at least 2 nodes");
      break;
    case StructureTask::connectivity:
      if (n < 2) throw InvalidArgument("connectivity needs at least 2 nodes");
      break;
    case StructureTask::degree:
      if (n < 1) throw InvalidArgument("degree needs at least 1 node");
      break;
    case StructureTask::hamilton:
      if (n > kHamiltonNodeCap) throw InstanceTooLarge("hamilton generation is capped at 20 nodes");
      break;
    case StructureTask::structure_generation:
      if (spec.directed) throw InvalidArgument("structure_generation produces un-directed graphs");
      if (n < 1) throw InvalidArgument("structure_generation needs at least 1 node");
      break;
    case StructureTask::cycle:
      break;
  }

  Rng rng(seed);
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    Graph g = gen_random_graph(spec, rng.next());
    Meta vars{{"seed", std::to_string(seed)}};
    if (attempt > 0) vars["resamples"] = std::to_string(attempt);
    StructureAnswer answer{task, std::nullopt, std::nullopt, std::nullopt, std::nullopt};

    auto pick_pair = [&]() {
      std::size_t a = rng.below(n);
      std::size_t b = rng.below(n - 1);
      if (b >= a) ++b;
      vars["source"] = std::to_string(a);
      vars["target"] = std::to_string(b);
    };

    try {
      switch (task) {
        case StructureTask::connectivity:
          pick_pair();
          answer.verdict = solve_connectivity(g, vars["source"], vars["target"]);
          break;
        case StructureTask::cycle:
          answer.verdict = solve_cycle(g);
          break;
        case StructureTask::hamilton: {
          auto h = solve_hamilton_path(g);
          answer.verdict = h.exists;
          if (h.path) vars["witness"] = join_nodes(*h.path, " -> ");
          break;
        }
        case StructureTask::bipartite_edge: {
          const std::size_t left = spec.bipartite->left;
          NodeParts parts;
          for (std::size_t i = 0; i < n; ++i) (i < left ? parts.left : parts.right).push_back(std::to_string(i));
          vars["source"] = std::to_string(rng.below(left));
          vars["target"] = std::to_string(left + rng.below(spec.bipartite->right));
          vars["left"] = join_nodes(parts.left, ", ");
          vars["right"] = join_nodes(parts.right, ", ");
          answer.verdict = solve_bipartite_edge(g, vars["source"], vars["target"], parts);
          break;
        }
        case StructureTask::shortest_path: {
          pick_pair();
          auto sp = solve_shortest_path(g, vars["source"], vars["target"]);
          answer.path = sp.path;
          answer.value = sp.weight;
          break;
        }
        case StructureTask::degree: {
          vars["node"] = std::to_string(rng.below(n));
          answer.value = Rational(static_cast<std::int64_t>(solve_degree(g, vars["node"])));
          break;
        }
        case StructureTask::structure_generation: {
          TaskRecord rec = render_structure_record(task, g, StructureAnswer{task, {}, {}, {}, g}, vars,
                                                   instructions);
          rec.passage = "Please generate an un-directed graph with " + number_word(n) + " node" +
                        (n == 1 ? "" : "s") + " ranging from 0 to " + std::to_string(n - 1) + " and " +
                        describe_edges(g) + ".";
          return rec;
        }
      }
    } catch (const Unreachable&) {
      continue;
    }
    return render_structure_record(task, g, answer, std::move(vars), instructions);
  }
  throw GenerationFailed("no satisfiable " + std::string(to_string(task)) + " sample after " +
                         std::to_string(kMaxResamples) + " resamples");
}

std::vector<TaskRecord> gen_structure_batch(StructureTask task, const RandomGraphSpec& spec, std::uint64_t seed,
                                            std::size_t count, Exec exec, const InstructionSet& instructions) {
  return map_indices<TaskRecord>(count, exec, [&](std::size_t i) {
    return gen_structure_task(task, spec, mix_seed(seed, i), instructions);
  });
}

StructureFamily parse_structure_family(std::string_view text) {
  if (text == "complete") return StructureFamily::complete;
  if (text == "path") return StructureFamily::path;
  if (text == "cycle") return StructureFamily::cycle;
  if (text == "star") return StructureFamily::star;
  if (text == "explicit" || text == "explicit_edges") return StructureFamily::explicit_edges;
  throw UnsupportedFamily("unsupported structure family '" + std::string(text) + "'");
}

std::string number_word(std::size_t n) {
  static constexpr std::array<std::string_view, 21> words{
      "zero",  "one",    "two",    "three",    "four",     "five",    "six",
      "seven", "eight",  "nine",   "ten",      "eleven",   "twelve",  "thirteen",
      "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
  return n < words.size() ? std::string(words[n]) : std::to_string(n);
}

DescribedGraph gen_structure_description_pair(const StructureTemplate& tmpl, std::uint64_t seed) {
  const std::size_t n = tmpl.num_nodes;
  if (n == 0) throw InvalidArgument("structure templates need at least one node");
  if (tmpl.family == StructureFamily::cycle && n < 3) throw InvalidArgument("a cycle needs at least 3 nodes");

  Graph g;
  g.name = "structure-graph";
  g.kind = GraphKind::structure;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back(std::to_string(i));
  auto link = [&](std::size_t a, std::size_t b) {
    if (a >= n || b >= n) throw InvalidArgument("explicit edge refers to a node outside 0.." + std::to_string(n - 1));
    g.edges.push_back(Edge{std::to_string(a), std::to_string(b), false, std::nullopt, std::nullopt});
  };

  const std::string nodes = n == 1 ? "one node numbered 0"
                                   : number_word(n) + " nodes ranging from 0 to " + std::to_string(n - 1);
  std::string description;
  switch (tmpl.family) {
    case StructureFamily::complete:
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) link(a, b);
      }
      description = "Please generate a full-connection un-directed graph with " + nodes + ".";
      break;
    case StructureFamily::path:
      for (std::size_t a = 0; a + 1 < n; ++a) link(a, a + 1);
      description = "Please generate an un-directed path graph with " + nodes +
                    (n > 1 ? ", in which each node is connected to the next one." : ".");
      break;
    case StructureFamily::cycle:
      for (std::size_t a = 0; a < n; ++a) link(a, (a + 1) % n);
      description = "Please generate an un-directed cycle graph with " + nodes +
                    ", in which each node is connected to the next one and node " + std::to_string(n - 1) +
                    " is connected back to node 0.";
      break;
    case StructureFamily::star:
      for (std::size_t b = 1; b < n; ++b) link(0, b);
      description = "Please generate an un-directed star graph with " + nodes +
                    (n > 1 ? ", in which node 0 is connected to every other node." : ".");
      break;
    case StructureFamily::explicit_edges: {
      if (tmpl.edges.empty()) {
        Rng rng(seed);
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = a + 1; b < n; ++b) {
            if (rng.bernoulli(0.5)) link(a, b);
          }
        }
      } else {
        for (auto [a, b] : tmpl.edges) link(a, b);
      }
      g = canonicalize(std::move(g));
      description = "Please generate an un-directed graph with " + nodes + " and " + describe_edges(g) + ".";
      break;
    }
  }
  return {std::move(description), canonicalize(std::move(g))};
}

}  // namespace graphlang
