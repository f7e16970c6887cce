#include "graphlang/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "graphlang/error.hpp"
#include "graphlang/verbalizer.hpp"

namespace graphlang {
namespace {

const Json& field(const Json& j, const char* key, std::size_t line) {
  if (!j.is_object()) throw SchemaError(line, "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(line, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string text_field(const Json& j, const char* key, std::size_t line) {
  const Json& v = field(j, key, line);
  if (!v.is_string()) throw SchemaError(line, std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::optional<std::string> nullable_text(const Json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(line, std::string("field \"") + key + "\" must be a string or null");
  return it->get<std::string>();
}

double number_field(const Json& j, const char* key, std::size_t line) {
  const Json& v = field(j, key, line);
  if (!v.is_number()) throw SchemaError(line, std::string("field \"") + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(line, std::string("field \"") + key + "\" must be finite");
  return d;
}

std::vector<double> number_list(const Json& j, const char* key, std::size_t line) {
  const Json& v = field(j, key, line);
  if (!v.is_array()) throw SchemaError(line, std::string("field \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw SchemaError(line, std::string("field \"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string id_field(const Json& j, std::size_t line) {
  const Json& v = field(j, "id", line);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw SchemaError(line, "field \"id\" must be a string or integer");
}

Cluster cluster_field(const Json& j, std::size_t line) {
  const std::string name = text_field(j, "cluster", line);
  auto c = parse_cluster(name);
  if (!c) throw SchemaError(line, "unknown cluster \"" + name + "\"");
  return *c;
}

Json meta_to_json(const Meta& meta) {
  Json j = Json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

Meta meta_field(const Json& j, std::size_t line) {
  Meta meta;
  auto it = j.find("meta");
  if (it == j.end() || it->is_null()) return meta;
  if (!it->is_object()) throw SchemaError(line, "field \"meta\" must be an object");
  for (const auto& [k, v] : it->items()) {
    if (v.is_string()) {
      meta[k] = v.get<std::string>();
    } else if (v.is_number() || v.is_boolean()) {
      meta[k] = v.dump();
    } else {
      throw SchemaError(line, "meta value \"" + k + "\" must be a scalar");
    }
  }
  return meta;
}

Json edge_to_json(const Edge& e) {
  Json j;
  j["source"] = e.source;
  j["target"] = e.target;
  j["directed"] = e.directed;
  j["relation"] = e.relation ? Json(*e.relation) : Json(nullptr);
  j["weight"] = e.weight ? Json(exact_weight(*e.weight)) : Json(nullptr);
  return j;
}

Edge edge_from_json(const Json& j, std::size_t line) {
  Edge e;
  e.source = text_field(j, "source", line);
  e.target = text_field(j, "target", line);
  auto d = j.find("directed");
  if (d != j.end()) {
    if (!d->is_boolean()) throw SchemaError(line, "edge field \"directed\" must be a boolean");
    e.directed = d->get<bool>();
  }
  e.relation = nullable_text(j, "relation", line);
  auto w = j.find("weight");
  if (w != j.end() && !w->is_null()) {
    std::optional<Rational> r;
    if (w->is_string()) r = Rational::parse(w->get<std::string>());
    else if (w->is_number_integer()) r = Rational(w->get<std::int64_t>());
    else if (w->is_number()) r = Rational::parse(w->dump());
    if (!r) throw SchemaError(line, "edge weight is not a number");
    e.weight = *r;
  }
  return e;
}

Json item_to_json(const std::optional<EditItem>& item) {
  if (!item) return nullptr;
  if (const auto* n = std::get_if<NodeId>(&*item)) return Json{{"node", *n}};
  return Json{{"edge", edge_to_json(std::get<Edge>(*item))}};
}

std::optional<EditItem> item_from_json(const Json& j, std::size_t line) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_object()) throw SchemaError(line, "edit item must be an object or null");
  if (j.contains("node")) return EditItem(text_field(j, "node", line));
  if (j.contains("edge")) return EditItem(edge_from_json(j.at("edge"), line));
  throw SchemaError(line, "edit item needs \"node\" or \"edge\"");
}

template <typename T, typename F>
std::vector<T> read_records(const std::string& path, F from_json) {
  std::vector<T> out;
  for (const auto& jl : parse_json_lines(read_text(path))) out.push_back(from_json(jl.value, jl.line));
  return out;
}

template <typename T>
void write_records(const std::string& path, const std::vector<T>& records) {
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(to_json(r));
  write_text(path, dump_json_lines(lines));
}

}  // namespace

std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<JsonLine> parse_json_lines(const std::string& text) {
  std::vector<JsonLine> out;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line;
    std::string_view raw(text.data() + start, end - start);
    start = end + 1;
    if (trim(raw).empty()) continue;
    Json value = Json::parse(raw, nullptr, false);
    if (value.is_discarded()) throw SchemaError(line, "malformed JSON");
    if (!value.is_object()) throw SchemaError(line, "expected a JSON object");
    out.push_back({line, std::move(value)});
  }
  return out;
}

std::string dump_json_lines(const std::vector<Json>& values) {
  std::string out;
  for (const auto& v : values) {
    out += v.dump(-1, ' ', false, Json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::string exact_weight(const Rational& weight) {
  std::string text = weight.to_string();
  if (Rational::parse(text) == weight) return text;
  return std::to_string(weight.numerator()) + "/" + std::to_string(weight.denominator());
}

Json graph_to_json(const Graph& graph) {
  const Graph g = canonicalize(graph);
  Json j;
  j["name"] = g.name;
  j["kind"] = std::string(to_string(g.kind));
  j["nodes"] = g.nodes;
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back(edge_to_json(e));
  j["edges"] = std::move(edges);
  Json props = Json::array();
  for (const auto& p : g.properties) props.push_back({{"node", p.node}, {"key", p.key}, {"value", p.value}});
  j["properties"] = std::move(props);
  return j;
}

Graph graph_from_json(const Json& j, std::size_t line) {
  if (!j.is_object()) throw SchemaError(line, "graph must be an object");
  Graph g;
  if (auto name = nullable_text(j, "name", line)) g.name = *name;
  if (auto kind = nullable_text(j, "kind", line)) {
    if (*kind == "structure") g.kind = GraphKind::structure;
    else if (*kind == "knowledge") g.kind = GraphKind::knowledge;
    else throw SchemaError(line, "unknown graph kind \"" + *kind + "\"");
  }
  if (auto it = j.find("nodes"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(line, "graph nodes must be an array");
    for (const auto& n : *it) {
      if (n.is_string()) g.nodes.push_back(n.get<std::string>());
      else if (n.is_number_integer()) g.nodes.push_back(n.dump());
      else throw SchemaError(line, "graph node must be a string or integer");
    }
  }
  if (auto it = j.find("edges"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(line, "graph edges must be an array");
    for (const auto& e : *it) g.edges.push_back(edge_from_json(e, line));
  }
  if (auto it = j.find("properties"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(line, "graph properties must be an array");
    for (const auto& p : *it) {
      g.properties.push_back({text_field(p, "node", line), text_field(p, "key", line), text_field(p, "value", line)});
    }
  }
  for (const auto& v : validate(g)) {
    if (v.severity == Severity::error) throw SchemaError(line, "invalid graph: " + v.message);
  }
  return canonicalize(std::move(g));
}

Json to_json(const CorpusRecord& r) {
  Json j;
  j["task"] = r.task;
  j["cluster"] = std::string(to_string(r.cluster));
  j["instruction"] = r.instruction;
  j["graph_text"] = r.graph_text ? Json(*r.graph_text) : Json(nullptr);
  j["passage"] = r.passage ? Json(*r.passage) : Json(nullptr);
  j["prompt"] = r.prompt;
  j["target"] = r.target;
  j["meta"] = meta_to_json(r.meta);
  return j;
}

CorpusRecord corpus_record_from_json(const Json& j, std::size_t line) {
  CorpusRecord r;
  r.task = text_field(j, "task", line);
  r.cluster = cluster_field(j, line);
  r.instruction = text_field(j, "instruction", line);
  r.graph_text = nullable_text(j, "graph_text", line);
  r.passage = nullable_text(j, "passage", line);
  r.prompt = text_field(j, "prompt", line);
  r.target = text_field(j, "target", line);
  r.meta = meta_field(j, line);
  return r;
}

Json to_json(const TaskRecord& r) {
  Json j;
  j["task"] = r.task;
  j["cluster"] = std::string(to_string(r.cluster));
  j["instruction"] = r.instruction;
  j["graph_text"] = r.graph ? Json(verbalize(*r.graph)) : Json(nullptr);
  j["passage"] = r.passage ? Json(*r.passage) : Json(nullptr);
  j["answer"] = r.answer;
  j["meta"] = meta_to_json(r.meta);
  return j;
}

TaskRecord task_record_from_json(const Json& j, std::size_t line) {
  TaskRecord r;
  r.task = text_field(j, "task", line);
  r.cluster = cluster_field(j, line);
  r.instruction = text_field(j, "instruction", line);
  r.passage = nullable_text(j, "passage", line);
  r.answer = text_field(j, "answer", line);
  r.meta = meta_field(j, line);
  if (auto it = j.find("graph"); it != j.end() && !it->is_null()) {
    r.graph = graph_from_json(*it, line);
  } else if (auto text = nullable_text(j, "graph_text", line)) {
    try {
      r.graph = parse_graph(*text).graph;
    } catch (const UnparseableGraph& e) {
      throw SchemaError(line, std::string("graph_text: ") + e.what());
    }
  }
  if (!r.graph && !r.passage) throw SchemaError(line, "record needs a graph or a passage");
  return r;
}

Json to_json(const PreferencePair& p) {
  Json j;
  j["task"] = p.source_task;
  j["cluster"] = std::string(to_string(p.cluster));
  j["prompt"] = p.prompt;
  j["chosen"] = p.chosen;
  j["rejected"] = p.rejected;
  j["scenario"] = {{"family", std::string(to_string(p.scenario.family))},
                   {"kind", std::string(to_string(p.scenario.kind))}};
  Json log = Json::array();
  for (const auto& op : p.edit_log) {
    log.push_back({{"kind", std::string(to_string(op.kind))},
                   {"before", item_to_json(op.before)},
                   {"after", item_to_json(op.after)}});
  }
  j["edit_log"] = std::move(log);
  j["meta"] = meta_to_json(p.meta);
  return j;
}

PreferencePair preference_from_json(const Json& j, std::size_t line) {
  PreferencePair p;
  p.source_task = text_field(j, "task", line);
  p.cluster = cluster_field(j, line);
  p.prompt = text_field(j, "prompt", line);
  p.chosen = text_field(j, "chosen", line);
  p.rejected = text_field(j, "rejected", line);
  const Json& sc = field(j, "scenario", line);
  const std::string family = text_field(sc, "family", line);
  const std::string kind = text_field(sc, "kind", line);
  auto f = parse_scenario_family(family);
  auto k = parse_scenario_kind(kind);
  if (!f || !k) throw SchemaError(line, "unknown scenario " + family + "/" + kind);
  p.scenario = {*f, *k};
  const Json& log = field(j, "edit_log", line);
  if (!log.is_array()) throw SchemaError(line, "field \"edit_log\" must be an array");
  for (const auto& op : log) {
    const std::string name = text_field(op, "kind", line);
    auto ek = parse_edit_kind(name);
    if (!ek) throw SchemaError(line, "unknown edit kind \"" + name + "\"");
    p.edit_log.push_back({*ek, item_from_json(field(op, "before", line), line),
                          item_from_json(field(op, "after", line), line)});
  }
  p.meta = meta_field(j, line);
  return p;
}

LogProbQuad quad_from_json(const Json& j, std::size_t line) {
  id_field(j, line);
  return {number_field(j, "policy_chosen", line), number_field(j, "policy_rejected", line),
          number_field(j, "ref_chosen", line), number_field(j, "ref_rejected", line)};
}

TokenPair token_pair_from_json(const Json& j, std::size_t line) {
  id_field(j, line);
  TokenPair p{number_list(j, "chosen_token_logprobs", line), number_list(j, "rejected_token_logprobs", line)};
  if (p.first.empty() || p.second.empty()) throw SchemaError(line, "token log-probability lists must be nonempty");
  return p;
}

Prediction prediction_from_json(const Json& j, std::size_t line) {
  return {id_field(j, line), text_field(j, "output", line)};
}

std::vector<CorpusRecord> read_corpus_jsonl(const std::string& path) {
  return read_records<CorpusRecord>(path, corpus_record_from_json);
}

void write_corpus_jsonl(const std::string& path, const std::vector<CorpusRecord>& records) {
  write_records(path, records);
}

std::vector<TaskRecord> read_task_jsonl(const std::string& path) {
  return read_records<TaskRecord>(path, task_record_from_json);
}

void write_task_jsonl(const std::string& path, const std::vector<TaskRecord>& records) {
  write_records(path, records);
}

std::vector<PreferencePair> read_preference_jsonl(const std::string& path) {
  return read_records<PreferencePair>(path, preference_from_json);
}

void write_preference_jsonl(const std::string& path, const std::vector<PreferencePair>& pairs) {
  write_records(path, pairs);
}

std::vector<LogProbQuad> read_quads_jsonl(const std::string& path) {
  return read_records<LogProbQuad>(path, quad_from_json);
}

std::vector<TokenPair> read_token_pairs_jsonl(const std::string& path) {
  return read_records<TokenPair>(path, token_pair_from_json);
}

std::vector<Prediction> read_predictions_jsonl(const std::string& path) {
  return read_records<Prediction>(path, prediction_from_json);
}

}  // namespace graphlang
