#include "graphlang/corruption.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "graphlang/corpus.hpp"
#include "graphlang/error.hpp"
#include "graphlang/random.hpp"
#include "graphlang/verbalizer.hpp"

namespace graphlang {
namespace {

constexpr std::array<std::string_view, 6> kEditNames = {"replace_node", "add_node",   "remove_node",
                                                        "replace_edge", "add_edge", "remove_edge"};
constexpr std::array<std::string_view, 6> kScenarioNames = {
    "correct_graph_wrong_answer", "unfactual", "conflict", "missing", "wrong_input", "unfaithful"};

std::string normalize_token(std::string_view text) {
  std::string out(text);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

struct EdgeLess {
  bool operator()(const Edge& a, const Edge& b) const { return edge_less(a, b); }
};
using EdgeSet = std::set<Edge, EdgeLess>;

struct NodeLess {
  bool operator()(const std::string& a, const std::string& b) const { return node_less(a, b); }
};
using NodeSet = std::set<std::string, NodeLess>;

Edge oriented(Edge e) {
  if (!e.directed && node_less(e.target, e.source)) std::swap(e.source, e.target);
  return e;
}

bool same_endpoints(const Edge& a, const Edge& b) {
  return a.source == b.source && a.target == b.target && a.directed == b.directed;
}

bool same_pair(const Edge& a, const Edge& b) {
  return (a.source == b.source && a.target == b.target) || (a.source == b.target && a.target == b.source);
}

std::vector<std::string> relation_vocabulary(const Graph& g, const VocabularyPool& pool) {
  std::set<std::string> rels;
  for (const auto& e : g.edges) {
    if (e.relation) rels.insert(*e.relation);
  }
  for (const auto& r : pool.relations) {
    std::string t = trim(r);
    if (!t.empty()) rels.insert(t);
  }
  return {rels.begin(), rels.end()};
}

void rename_node(Graph& g, const NodeId& from, const NodeId& to) {
  for (auto& n : g.nodes) {
    if (n == from) n = to;
  }
  for (auto& e : g.edges) {
    if (e.source == from) e.source = to;
    if (e.target == from) e.target = to;
  }
  for (auto& p : g.properties) {
    if (p.node == from) p.node = to;
  }
}

void erase_node(Graph& g, const NodeId& node) {
  std::erase(g.nodes, node);
  std::erase_if(g.edges, [&](const Edge& e) { return e.source == node || e.target == node; });
  std::erase_if(g.properties, [&](const NodeProperty& p) { return p.node == node; });
}

bool erase_edge(Graph& g, const Edge& edge) {
  const Edge want = oriented(edge);
  auto it = std::find(g.edges.begin(), g.edges.end(), want);
  if (it == g.edges.end()) return false;
  g.edges.erase(it);
  return true;
}

// Mutable state of one edit_graph call.
class Editor {
 public:
  Editor(const Graph& graph, std::uint64_t seed, const VocabularyPool& pool)
      : g_(canonicalize(graph)), rng_(seed), pool_(pool) {}

  void apply(EditKind kind) {
    switch (kind) {
      case EditKind::replace_node: replace_node(); break;
      case EditKind::add_node: add_node(); break;
      case EditKind::remove_node: remove_node(); break;
      case EditKind::replace_edge: replace_edge(); break;
      case EditKind::add_edge: add_edge(); break;
      case EditKind::remove_edge: remove_edge(); break;
    }
    g_ = canonicalize(std::move(g_));
  }

  EditResult finish() { return {std::move(g_), std::move(log_)}; }

 private:
  NodeId fresh_node() {
    NodeSet cands;
    for (const auto& raw : pool_.nodes) {
      std::string n = trim(raw);
      if (!n.empty() && !g_.has_node(n) && !removed_nodes_.count(n)) cands.insert(n);
    }
    if (!cands.empty()) {
      std::vector<NodeId> v(cands.begin(), cands.end());
      return rng_.pick(v);
    }
    const bool numeric = g_.kind == GraphKind::structure ||
                         std::all_of(g_.nodes.begin(), g_.nodes.end(), [](const auto& n) { return is_integer_name(n); });
    if (numeric) {
      long long next = 0;
      for (const auto& n : g_.nodes) next = std::max(next, std::stoll(n) + 1);
      for (const auto& n : removed_nodes_) {
        if (is_integer_name(n)) next = std::max(next, std::stoll(n) + 1);
      }
      return std::to_string(next);
    }
    throw InsufficientMaterial("no replacement node available outside the graph");
  }

  std::vector<NodeId> editable_nodes() const {
    std::vector<NodeId> out;
    for (const auto& n : g_.nodes) {
      if (!added_nodes_.count(n)) out.push_back(n);
    }
    return out;
  }

  std::vector<Edge> editable_edges() const {
    std::vector<Edge> out;
    for (const auto& e : g_.edges) {
      if (!added_edges_.count(e)) out.push_back(e);
    }
    return out;
  }

  bool fresh_edge(const Edge& e) const {
    return !removed_edges_.count(e) && std::find(g_.edges.begin(), g_.edges.end(), e) == g_.edges.end();
  }

  void replace_node() {
    auto nodes = editable_nodes();
    if (nodes.empty()) throw InsufficientMaterial("replace_node needs a node");
    NodeId from = rng_.pick(nodes);
    NodeId to = fresh_node();
    for (auto& e : g_.edges) {
      if (e.source == from || e.target == from) {
        Edge renamed = e;
        if (renamed.source == from) renamed.source = to;
        if (renamed.target == from) renamed.target = to;
        added_edges_.insert(oriented(renamed));
      }
    }
    rename_node(g_, from, to);
    removed_nodes_.insert(from);
    added_nodes_.insert(to);
    log_.push_back({EditKind::replace_node, from, to});
  }

  void add_node() {
    NodeId n = fresh_node();
    g_.nodes.push_back(n);
    added_nodes_.insert(n);
    log_.push_back({EditKind::add_node, std::nullopt, n});
  }

  void remove_node() {
    auto nodes = editable_nodes();
    if (nodes.empty()) throw InsufficientMaterial("remove_node needs a node");
    NodeId n = rng_.pick(nodes);
    erase_node(g_, n);
    removed_nodes_.insert(n);
    log_.push_back({EditKind::remove_node, n, std::nullopt});
  }

  std::vector<Edge> replacements(const Edge& e, const std::vector<std::string>& relations) const {
    std::vector<Edge> out;
    if (e.relation) {
      for (const auto& r : relations) {
        if (r == *e.relation) continue;
        Edge alt = e;
        alt.relation = r;
        if (fresh_edge(alt)) out.push_back(alt);
      }
    } else if (e.weight) {
      for (std::int64_t step = 1; step <= 3; ++step) {
        Edge alt = e;
        alt.weight = *e.weight + Rational(step);
        if (fresh_edge(alt)) out.push_back(alt);
      }
    }
    for (const auto& n : g_.nodes) {
      if (n == e.target || n == e.source) continue;
      Edge alt = e;
      alt.target = n;
      alt = oriented(alt);
      if (!fresh_edge(alt)) continue;
      // Rewiring onto an existing pair would read as a conflict.
      const bool taken = std::any_of(g_.edges.begin(), g_.edges.end(),
                                     [&](const Edge& x) { return same_pair(x, alt); });
      if (!taken) out.push_back(alt);
    }
    return out;
  }

  void replace_edge() {
    auto edges = editable_edges();
    if (edges.empty()) throw InsufficientMaterial("replace_edge needs an edge");
    const auto relations = relation_vocabulary(g_, pool_);
    rng_.shuffle(edges);
    for (const auto& e : edges) {
      auto alts = replacements(e, relations);
      if (alts.empty()) continue;
      Edge to = rng_.pick(alts);
      erase_edge(g_, e);
      g_.edges.push_back(to);
      removed_edges_.insert(e);
      added_edges_.insert(to);
      log_.push_back({EditKind::replace_edge, e, to});
      return;
    }
    throw InsufficientMaterial("no edge has a distinct replacement");
  }

  Edge edge_template() const {
    Edge proto;
    std::size_t directed = 0;
    for (const auto& e : g_.edges) directed += e.directed ? 1 : 0;
    proto.directed = g_.edges.empty() ? g_.kind == GraphKind::knowledge : 2 * directed >= g_.edges.size();
    return proto;
  }

  void add_edge() {
    if (g_.nodes.size() < 2) throw InsufficientMaterial("add_edge needs two nodes");
    const auto relations = relation_vocabulary(g_, pool_);
    std::vector<Rational> weights;
    for (const auto& e : g_.edges) {
      if (e.weight) weights.push_back(*e.weight);
    }
    const bool use_relation = std::any_of(g_.edges.begin(), g_.edges.end(), [](const Edge& e) { return e.relation.has_value(); });
    const Edge proto = edge_template();

    auto valid = [&](const Edge& e) {
      if (removed_edges_.count(e)) return false;
      return std::none_of(g_.edges.begin(), g_.edges.end(), [&](const Edge& x) { return same_pair(x, e); });
    };
    auto dress = [&](Edge e) {
      if (use_relation && !relations.empty()) e.relation = rng_.pick(relations);
      if (!weights.empty()) e.weight = rng_.pick(weights);
      return e;
    };

    const auto& nodes = g_.nodes;
    for (int attempt = 0; attempt < 64; ++attempt) {
      Edge e = proto;
      e.source = rng_.pick(nodes);
      e.target = rng_.pick(nodes);
      if (e.source == e.target) continue;
      e = oriented(std::move(e));
      if (!valid(e)) continue;
      commit_add(dress(std::move(e)));
      return;
    }
    std::vector<Edge> cands;
    for (const auto& u : nodes) {
      for (const auto& v : nodes) {
        if (u == v || (!proto.directed && node_less(v, u))) continue;
        Edge e = proto;
        e.source = u;
        e.target = v;
        if (valid(e)) cands.push_back(e);
      }
    }
    if (cands.empty()) throw InsufficientMaterial("graph has no free node pair for add_edge");
    commit_add(dress(rng_.pick(cands)));
  }

  void commit_add(Edge e) {
    if (removed_edges_.count(e)) throw InsufficientMaterial("add_edge would restore a removed edge");
    g_.edges.push_back(e);
    added_edges_.insert(e);
    log_.push_back({EditKind::add_edge, std::nullopt, e});
  }

  void remove_edge() {
    auto edges = editable_edges();
    if (edges.empty()) throw InsufficientMaterial("remove_edge needs an edge");
    Edge e = rng_.pick(edges);
    erase_edge(g_, e);
    removed_edges_.insert(e);
    log_.push_back({EditKind::remove_edge, e, std::nullopt});
  }

  Graph g_;
  Rng rng_;
  const VocabularyPool& pool_;
  std::vector<EditOp> log_;
  NodeSet added_nodes_, removed_nodes_;
  EdgeSet added_edges_, removed_edges_;
};

std::string join_items(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::vector<std::string> listed_items(const Scenario& scenario, const std::vector<EditOp>& log, GraphKind kind) {
  std::vector<std::string> items;
  for (const auto& op : log) {
    switch (scenario.kind) {
      case ScenarioKind::unfactual:
        if (op.after) items.push_back(render_item(*op.after, kind));
        break;
      case ScenarioKind::conflict:
        if (op.kind == EditKind::add_edge && op.before) items.push_back(render_item(*op.before, kind));
        if (op.kind == EditKind::add_edge && op.after) items.push_back(render_item(*op.after, kind));
        break;
      case ScenarioKind::missing:
        if (op.kind == EditKind::remove_node && op.before) items.push_back(std::get<NodeId>(*op.before));
        break;
      default: break;
    }
  }
  return items;
}

constexpr std::string_view kUnanswerable = ". So the question is unanswerable, you had better provide a correct graph.";

std::vector<std::string> distinct_excluding(const std::vector<std::string>& pool, const std::string& original) {
  std::set<std::string> uniq(pool.begin(), pool.end());
  uniq.erase(original);
  return {uniq.begin(), uniq.end()};
}

int checked_edits(const CorruptionOptions& options) {
  if (options.edits < 1 || options.edits > 3) {
    throw InvalidArgument("edit budget must be between 1 and 3, got " + std::to_string(options.edits));
  }
  return options.edits;
}

// Node whose removal makes the record unanswerable: the queried nodes of
// structure tasks, the answer entity of QA, otherwise any node.
NodeId crucial_node(const TaskRecord& record, const Graph& g, Rng& rng) {
  std::vector<NodeId> cands;
  if (record.cluster == Cluster::graph_qa) {
    const std::string answer = trim(record.answer);
    if (g.has_node(answer)) return answer;
  }
  for (const char* key : {"source", "target", "node", "left", "right", "head", "tail", "user", "item"}) {
    auto it = record.meta.find(key);
    if (it != record.meta.end() && g.has_node(trim(it->second))) {
      cands.push_back(trim(it->second));
    }
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  if (cands.empty()) cands = g.nodes;
  if (cands.empty()) throw InsufficientMaterial("graph has no node to remove");
  return rng.pick(cands);
}

EditResult chain_conflicts(const Graph& g, int edits, std::uint64_t seed, const VocabularyPool& pool) {
  EditResult out{canonicalize(g), {}};
  for (int i = 0; i < edits; ++i) {
    EditResult step = make_conflict(out.graph, mix_seed(seed, static_cast<std::uint64_t>(i)), pool);
    out.graph = std::move(step.graph);
    out.log.insert(out.log.end(), step.log.begin(), step.log.end());
  }
  return out;
}

void check_pair(const PreferencePair& p) {
  if (p.chosen == p.rejected) throw InsufficientMaterial("corruption produced identical chosen and rejected");
  if (p.prompt.empty() || p.chosen.empty() || p.rejected.empty()) {
    throw InsufficientMaterial("corruption produced an empty prompt or response");
  }
}

}  // namespace

std::string_view to_string(EditKind kind) { return kEditNames[static_cast<std::size_t>(kind)]; }

std::optional<EditKind> parse_edit_kind(std::string_view text) {
  const std::string t = normalize_token(text);
  for (std::size_t i = 0; i < kEditNames.size(); ++i) {
    if (t == kEditNames[i]) return static_cast<EditKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ScenarioFamily family) {
  return family == ScenarioFamily::reasoning ? "reasoning" : "generation";
}

std::string_view to_string(ScenarioKind kind) { return kScenarioNames[static_cast<std::size_t>(kind)]; }

std::optional<ScenarioFamily> parse_scenario_family(std::string_view text) {
  if (text == "reasoning") return ScenarioFamily::reasoning;
  if (text == "generation") return ScenarioFamily::generation;
  return std::nullopt;
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) {
  const std::string t = normalize_token(text);
  for (std::size_t i = 0; i < kScenarioNames.size(); ++i) {
    if (t == kScenarioNames[i]) return static_cast<ScenarioKind>(i);
  }
  return std::nullopt;
}

bool Scenario::valid() const {
  switch (kind) {
    case ScenarioKind::correct_graph_wrong_answer: return family == ScenarioFamily::reasoning;
    case ScenarioKind::wrong_input:
    case ScenarioKind::unfaithful: return family == ScenarioFamily::generation;
    default: return true;
  }
}

std::string render_item(const EditItem& item, GraphKind kind) {
  if (const auto* node = std::get_if<NodeId>(&item)) return render_node(*node, kind);
  return render_edge(std::get<Edge>(item), kind);
}

EditResult edit_graph(const Graph& graph, const std::vector<EditKind>& kinds, std::uint64_t seed,
                      const VocabularyPool& pool) {
  Editor editor(graph, seed, pool);
  for (EditKind k : kinds) editor.apply(k);
  EditResult out = editor.finish();
  if (!kinds.empty() && graph_equal(out.graph, graph)) {
    throw InsufficientMaterial("edits left the graph unchanged");
  }
  return out;
}

EditResult remove_node(const Graph& graph, const NodeId& node) {
  Graph g = canonicalize(graph);
  const std::string name = trim(node);
  if (!g.has_node(name)) throw UnknownNode(node);
  erase_node(g, name);
  return {std::move(g), {{EditKind::remove_node, name, std::nullopt}}};
}

EditResult make_conflict(const Graph& graph, std::uint64_t seed, const VocabularyPool& pool) {
  Graph g = canonicalize(graph);
  if (g.edges.empty()) throw InsufficientMaterial("conflict needs at least one edge");
  Rng rng(seed);
  const auto relations = relation_vocabulary(g, pool);

  struct Option {
    Edge anchor;
    std::vector<Edge> alternatives;
  };
  std::vector<Option> options;
  for (const auto& e : g.edges) {
    Option opt{e, {}};
    if (e.relation) {
      for (const auto& r : relations) {
        const bool used = std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& x) {
          return same_endpoints(x, e) && x.relation == r;
        });
        if (used) continue;
        Edge alt = e;
        alt.relation = r;
        opt.alternatives.push_back(alt);
      }
    } else {
      // An unweighted edge implicitly weighs 1.
      const Rational w = e.weight.value_or(Rational(1));
      for (std::int64_t step = 1; step <= 3; ++step) {
        Edge alt = e;
        alt.weight = w + Rational(step);
        const bool used = std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& x) {
          return same_endpoints(x, e) && !x.relation && x.weight.value_or(Rational(1)) == *alt.weight;
        });
        if (!used) opt.alternatives.push_back(alt);
      }
    }
    if (!opt.alternatives.empty()) options.push_back(std::move(opt));
  }
  if (options.empty()) throw InsufficientMaterial("no edge admits a conflicting counterpart");

  const Option& chosen = rng.pick(options);
  Edge added = rng.pick(chosen.alternatives);
  g.edges.push_back(added);
  return {canonicalize(std::move(g)), {{EditKind::add_edge, chosen.anchor, added}}};
}

Graph apply_edit_log(const Graph& graph, const std::vector<EditOp>& log) {
  Graph g = canonicalize(graph);
  auto node_of = [](const std::optional<EditItem>& item, const char* what) {
    if (!item || !std::holds_alternative<NodeId>(*item)) throw InvalidArgument(std::string("edit log entry lacks ") + what);
    return std::get<NodeId>(*item);
  };
  auto edge_of = [](const std::optional<EditItem>& item, const char* what) {
    if (!item || !std::holds_alternative<Edge>(*item)) throw InvalidArgument(std::string("edit log entry lacks ") + what);
    return std::get<Edge>(*item);
  };
  for (const auto& op : log) {
    switch (op.kind) {
      case EditKind::replace_node: rename_node(g, node_of(op.before, "old node"), node_of(op.after, "new node")); break;
      case EditKind::add_node: g.nodes.push_back(node_of(op.after, "new node")); break;
      case EditKind::remove_node: {
        const NodeId n = node_of(op.before, "old node");
        if (!g.has_node(n)) throw UnknownNode(n);
        erase_node(g, n);
        break;
      }
      case EditKind::replace_edge:
        if (!erase_edge(g, edge_of(op.before, "old edge"))) throw InvalidArgument("replaced edge not in graph");
        g.edges.push_back(edge_of(op.after, "new edge"));
        break;
      case EditKind::add_edge: g.edges.push_back(edge_of(op.after, "new edge")); break;
      case EditKind::remove_edge:
        if (!erase_edge(g, edge_of(op.before, "old edge"))) throw InvalidArgument("removed edge not in graph");
        break;
    }
    g = canonicalize(std::move(g));
  }
  return g;
}

std::string render_refusal(const Scenario& scenario, const std::vector<EditOp>& log, GraphKind kind) {
  const auto items = listed_items(scenario, log, kind);
  switch (scenario.kind) {
    case ScenarioKind::unfactual:
    case ScenarioKind::conflict:
    case ScenarioKind::missing: break;
    default: throw WrongScenario("no refusal for scenario " + std::string(to_string(scenario.kind)));
  }
  if (items.empty()) throw WrongScenario("edit log has nothing to list for " + std::string(to_string(scenario.kind)));
  std::string out;
  if (scenario.kind == ScenarioKind::unfactual) {
    out = "Sorry, the graph contains some wrong knowledge in the follow: ";
  } else if (scenario.kind == ScenarioKind::conflict) {
    out = "Sorry, the graph contains some conflict edges in the follow: ";
  } else {
    out = "Sorry, the graph does not exist node ";
  }
  out += join_items(items);
  out += kUnanswerable;
  return out;
}

std::string render_corrected_answer(const std::vector<EditOp>& log, const std::string& original, GraphKind kind) {
  const auto items = listed_items({ScenarioFamily::reasoning, ScenarioKind::unfactual}, log, kind);
  if (items.empty()) throw WrongScenario("edit log has no unfactual item to list");
  return "Sorry, the graph contains some wrong knowledge in the follow: " + join_items(items) +
         ". based on the corrected graph, the answer can be " + original + ".";
}

std::string render_missing_answer(const std::string& original) {
  return "Based on the world knowledge, the correct answer to the question is " + original +
         ", but the answer does not exist in the graph.";
}

PreferencePair make_reasoning_preference(const TaskRecord& record, ScenarioKind kind,
                                         const std::vector<std::string>& answer_pool, std::uint64_t seed,
                                         const CorruptionOptions& options) {
  const Scenario scenario{ScenarioFamily::reasoning, kind};
  const std::string cluster(to_string(record.cluster));
  if (is_generation_cluster(record.cluster) || !scenario.valid()) {
    throw WrongScenario(std::string(to_string(kind)) + " is not a reasoning scenario for " + cluster);
  }
  if (record.cluster == Cluster::node_cls && kind != ScenarioKind::correct_graph_wrong_answer) {
    throw WrongScenario("Node CLS records only support correct_graph_wrong_answer");
  }
  if (record.cluster == Cluster::caption && kind == ScenarioKind::missing) {
    throw WrongScenario("Caption records do not support the missing scenario");
  }

  const CorpusRecord original = assemble(record);
  PreferencePair pair;
  pair.scenario = scenario;
  pair.source_task = record.task;
  pair.cluster = record.cluster;
  pair.meta = record.meta;
  Rng rng(seed);

  if (kind == ScenarioKind::correct_graph_wrong_answer) {
    auto pool = distinct_excluding(answer_pool, original.target);
    if (pool.empty()) throw EmptyPool("no answer other than the original to sample");
    pair.prompt = original.prompt;
    pair.chosen = original.target;
    pair.rejected = rng.pick(pool);
    check_pair(pair);
    return pair;
  }

  const int edits = checked_edits(options);
  if (!record.graph) throw MissingComponent(cluster + " record '" + record.task + "' needs a graph");
  const Graph gold = canonicalize(*record.graph);
  const std::uint64_t edit_seed = rng.next();
  EditResult edited;
  if (kind == ScenarioKind::unfactual) {
    edited = edit_graph(gold, std::vector<EditKind>(static_cast<std::size_t>(edits), EditKind::replace_edge),
                        edit_seed, options.pool);
  } else if (kind == ScenarioKind::conflict) {
    edited = chain_conflicts(gold, edits, edit_seed, options.pool);
  } else {
    edited = remove_node(gold, crucial_node(record, gold, rng));
    if (edits > 1) {
      EditResult more = edit_graph(edited.graph,
                                   std::vector<EditKind>(static_cast<std::size_t>(edits - 1), EditKind::remove_node),
                                   edit_seed, options.pool);
      edited.graph = std::move(more.graph);
      edited.log.insert(edited.log.end(), more.log.begin(), more.log.end());
    }
  }

  TaskRecord corrupted = record;
  corrupted.graph = edited.graph;
  pair.prompt = assemble(corrupted, VerbalStyle::for_graph(gold)).prompt;
  pair.edit_log = std::move(edited.log);
  pair.rejected = original.target;
  const bool answer_variant = record.cluster == Cluster::caption || record.cluster == Cluster::graph_qa;
  if (kind == ScenarioKind::unfactual && answer_variant) {
    pair.chosen = render_corrected_answer(pair.edit_log, original.target, gold.kind);
  } else if (kind == ScenarioKind::missing && record.cluster == Cluster::graph_qa) {
    pair.chosen = render_missing_answer(original.target);
  } else {
    pair.chosen = render_refusal(scenario, pair.edit_log, gold.kind);
  }
  check_pair(pair);
  return pair;
}

PreferencePair make_generation_preference(const TaskRecord& record, ScenarioKind kind,
                                          const std::vector<std::string>& input_pool, std::uint64_t seed,
                                          const CorruptionOptions& options) {
  const Scenario scenario{ScenarioFamily::generation, kind};
  if (!is_generation_cluster(record.cluster) || !scenario.valid()) {
    throw WrongScenario(std::string(to_string(kind)) + " is not a generation scenario for " +
                        std::string(to_string(record.cluster)));
  }
  TaskRecord base = record;
  if (!base.graph) base.graph = parse_graph(record.answer).graph;
  const Graph gold = canonicalize(*base.graph);
  const VerbalStyle style = VerbalStyle::for_graph(gold);
  const CorpusRecord original = assemble(base, style);

  PreferencePair pair;
  pair.scenario = scenario;
  pair.source_task = record.task;
  pair.cluster = record.cluster;
  pair.meta = record.meta;
  pair.prompt = original.prompt;
  Rng rng(seed);

  if (kind == ScenarioKind::wrong_input) {
    auto pool = distinct_excluding(input_pool, original.target);
    if (pool.empty()) throw EmptyPool("no graph from another example to sample");
    pair.chosen = original.target;
    pair.rejected = rng.pick(pool);
    check_pair(pair);
    return pair;
  }

  const auto edits = static_cast<std::size_t>(checked_edits(options));
  const std::uint64_t edit_seed = rng.next();
  EditResult edited;
  switch (kind) {
    case ScenarioKind::unfaithful:
      edited = edit_graph(gold, std::vector<EditKind>(edits, EditKind::replace_node), edit_seed, options.pool);
      break;
    case ScenarioKind::conflict:
      edited = chain_conflicts(gold, static_cast<int>(edits), edit_seed, options.pool);
      break;
    case ScenarioKind::unfactual:
      edited = edit_graph(gold, std::vector<EditKind>(edits, EditKind::replace_edge), edit_seed, options.pool);
      break;
    default: {
      std::vector<EditKind> kinds;
      std::size_t removable = gold.edges.size();
      for (std::size_t i = 0; i < edits; ++i) {
        if (removable > 0 && rng.bernoulli(0.5)) {
          kinds.push_back(EditKind::remove_edge);
          --removable;
        } else {
          kinds.push_back(EditKind::add_edge);
        }
      }
      edited = edit_graph(gold, kinds, edit_seed, options.pool);
      break;
    }
  }
  const std::string corrupted = verbalize(edited.graph, style);
  pair.edit_log = std::move(edited.log);

  const bool edited_is_chosen = (kind == ScenarioKind::unfactual || kind == ScenarioKind::missing) &&
                                options.literal_ie_assignment;
  pair.chosen = edited_is_chosen ? corrupted : original.target;
  pair.rejected = edited_is_chosen ? original.target : corrupted;
  check_pair(pair);
  return pair;
}

PreferencePair make_preference(const TaskRecord& record, ScenarioKind kind, const std::vector<std::string>& pool,
                               std::uint64_t seed, const CorruptionOptions& options) {
  if (is_generation_cluster(record.cluster)) return make_generation_preference(record, kind, pool, seed, options);
  return make_reasoning_preference(record, kind, pool, seed, options);
}

PreferenceBatch make_preference_batch(const std::vector<TaskRecord>& records, ScenarioKind kind,
                                      std::uint64_t seed, Exec exec, const CorruptionOptions& options) {
  // Targets grouped by task form the sampling pools.
  std::vector<std::optional<std::string>> targets(records.size());
  for_each_index(records.size(), exec, [&](std::size_t i) {
    try {
      TaskRecord r = records[i];
      if (is_generation_cluster(r.cluster) && !r.graph) r.graph = parse_graph(r.answer).graph;
      targets[i] = assemble(r).target;
    } catch (const Error&) {
    }
  });
  std::map<std::string, std::vector<std::string>> pools;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (targets[i]) pools[records[i].task].push_back(*targets[i]);
  }

  const std::vector<std::string> no_pool;
  auto pool_of = [&](const std::string& task) -> const std::vector<std::string>& {
    auto it = pools.find(task);
    return it == pools.end() ? no_pool : it->second;
  };

  using Outcome = std::pair<std::optional<PreferencePair>, std::string>;
  auto outcomes = map_indices<Outcome>(records.size(), exec, [&](std::size_t i) -> Outcome {
    try {
      return {make_preference(records[i], kind, pool_of(records[i].task), mix_seed(seed, i), options), {}};
    } catch (const Error& e) {
      return {std::nullopt, e.what()};
    }
  });

  PreferenceBatch batch;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].first) {
      batch.pairs.push_back(std::move(*outcomes[i].first));
    } else {
      batch.skipped.push_back({i, outcomes[i].second});
    }
  }
  return batch;
}

}  // namespace graphlang
