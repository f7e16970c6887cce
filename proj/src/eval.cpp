#include "graphlang/eval.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "graphlang/error.hpp"
#include "graphlang/verbalizer.hpp"

namespace graphlang {
namespace {

bool is_terminal_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

using Triple = std::tuple<std::string, std::string, std::string>;

struct ItemSets {
  std::set<std::string> nodes;
  std::set<Triple> triples;
};

ItemSets items_of(const Graph& graph, MatchMode mode) {
  auto key = [mode](std::string_view s) { return mode == MatchMode::normalized ? normalize(s) : trim(s); };
  ItemSets out;
  const Graph g = canonicalize(graph);
  for (const auto& n : g.nodes) out.nodes.insert(key(n));
  for (const auto& e : g.edges) {
    std::string s = key(e.source), t = key(e.target);
    if (!e.directed && t < s) std::swap(s, t);
    out.triples.insert({s, e.relation ? key(*e.relation) : std::string(), t});
  }
  return out;
}

template <typename Set>
std::size_t overlap(const Set& a, const Set& b) {
  std::size_t n = 0;
  for (const auto& x : a) n += b.count(x);
  return n;
}

double mean(const std::vector<ExampleScore>& scores) {
  std::vector<double> v;
  v.reserve(scores.size());
  for (const auto& s : scores) v.push_back(s.score);
  return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

std::vector<std::string> split_aliases(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    if (bar == std::string::npos) bar = text.size();
    std::string a = trim(std::string_view(text).substr(start, bar - start));
    if (!a.empty()) out.push_back(a);
    start = bar + 1;
  }
  return out;
}

struct NgramStats {
  std::array<std::size_t, 4> matches{};
  std::array<std::size_t, 4> totals{};
  std::size_t cand_len = 0;
  std::size_t ref_len = 0;
};

NgramStats ngram_stats(const std::string& candidate, const std::string& reference) {
  const auto c = bleu_tokenize(candidate);
  const auto r = bleu_tokenize(reference);
  NgramStats st;
  st.cand_len = c.size();
  st.ref_len = r.size();
  for (std::size_t n = 1; n <= 4; ++n) {
    std::map<std::vector<std::string>, std::size_t> ref_counts, cand_counts;
    for (std::size_t i = 0; i + n <= r.size(); ++i) ++ref_counts[{r.begin() + i, r.begin() + i + n}];
    for (std::size_t i = 0; i + n <= c.size(); ++i) ++cand_counts[{c.begin() + i, c.begin() + i + n}];
    for (const auto& [gram, count] : cand_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) st.matches[n - 1] += std::min(count, it->second);
      st.totals[n - 1] += count;
    }
  }
  return st;
}

double bleu_from_stats(const NgramStats& st) {
  if (st.cand_len == 0 || st.matches[0] == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double m = static_cast<double>(st.matches[n]);
    double t = static_cast<double>(st.totals[n]);
    if (st.matches[n] == 0) {
      m += 1.0;
      t += 1.0;
    }
    log_sum += std::log(m / t);
  }
  const double c = static_cast<double>(st.cand_len);
  const double r = static_cast<double>(st.ref_len);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum / 4.0);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
  return buf;
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && (is_terminal_punct(out.back()) || out.back() == ' ')) out.pop_back();
  return out;
}

double exact_match(std::string_view pred, std::string_view gold) {
  return normalize(pred) == normalize(gold) ? 1.0 : 0.0;
}

double hits_at_1(std::string_view pred, const std::vector<std::string>& gold_set) {
  if (gold_set.empty()) throw EmptyGoldSet("hits@1 needs at least one gold answer");
  const std::string p = normalize(pred);
  return std::any_of(gold_set.begin(), gold_set.end(), [&](const auto& g) { return normalize(g) == p; }) ? 1.0 : 0.0;
}

F1Score f1_from_counts(std::size_t hits, std::size_t predicted, std::size_t gold) {
  if (predicted == 0 && gold == 0) return {1.0, 1.0, 1.0};
  F1Score s;
  s.precision = predicted ? static_cast<double>(hits) / static_cast<double>(predicted) : 0.0;
  s.recall = gold ? static_cast<double>(hits) / static_cast<double>(gold) : 0.0;
  // Same value as 2PR/(P+R), but a single rounding.
  s.f1 = static_cast<double>(2 * hits) / static_cast<double>(predicted + gold);
  return s;
}

GraphF1 graph_f1(const Graph& pred, const Graph& gold, MatchMode mode) {
  const ItemSets p = items_of(pred, mode);
  const ItemSets g = items_of(gold, mode);
  const std::size_t node_hits = overlap(p.nodes, g.nodes);
  const std::size_t triple_hits = overlap(p.triples, g.triples);
  GraphF1 out;
  out.ner = f1_from_counts(node_hits, p.nodes.size(), g.nodes.size());
  out.re = f1_from_counts(triple_hits, p.triples.size(), g.triples.size());
  out.graph = f1_from_counts(node_hits + triple_hits, p.nodes.size() + p.triples.size(),
                             g.nodes.size() + g.triples.size());
  return out;
}

std::vector<std::string> bleu_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else if (std::ispunct(u)) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      cur += static_cast<char>(std::tolower(u));
    }
  }
  flush();
  return tokens;
}

double bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references) {
  if (candidates.size() != references.size()) {
    throw LengthMismatch(std::to_string(candidates.size()) + " candidates vs " + std::to_string(references.size()) +
                         " references");
  }
  if (candidates.empty()) throw EmptyInput("BLEU needs at least one candidate");
  NgramStats total;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const NgramStats st = ngram_stats(candidates[i], references[i]);
    for (std::size_t n = 0; n < 4; ++n) {
      total.matches[n] += st.matches[n];
      total.totals[n] += st.totals[n];
    }
    total.cand_len += st.cand_len;
    total.ref_len += st.ref_len;
  }
  return bleu_from_stats(total);
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::em: return "EM";
    case Metric::acc: return "ACC";
    case Metric::hits1: return "Hits@1";
    case Metric::bleu: return "BLEU";
    case Metric::f1_ner: return "F1_NER";
    case Metric::f1_re: return "F1_RE";
    case Metric::f1_graph: return "F1_Graph";
  }
  return "";
}

std::optional<Metric> parse_metric(std::string_view text) {
  std::string t;
  for (char c : text) t += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  static const std::map<std::string, Metric> names = {
      {"em", Metric::em},         {"acc", Metric::acc},       {"hits@1", Metric::hits1},
      {"hits1", Metric::hits1},   {"hits_at_1", Metric::hits1}, {"bleu", Metric::bleu},
      {"f1_ner", Metric::f1_ner}, {"f1_re", Metric::f1_re},   {"f1_graph", Metric::f1_graph}};
  auto it = names.find(t);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["metric"] = std::string(to_string(metric));
  j["value"] = value;
  j["count"] = count;
  if (metric == Metric::f1_ner || metric == Metric::f1_re || metric == Metric::f1_graph) {
    j["parse_failures"] = parse_failures;
    j["parse_diagnostics"] = parse_diagnostics;
  }
  auto& rows = j["per_example"] = nlohmann::ordered_json::array();
  for (const auto& s : per_example) rows.push_back({{"id", s.id}, {"score", s.score}});
  return j.dump(2);
}

std::string MetricReport::to_table() const {
  std::string out = "metric     value     count\n";
  char line[96];
  std::snprintf(line, sizeof line, "%-10s %-9s %zu\n", std::string(to_string(metric)).c_str(), percent(value).c_str(),
                count);
  out += line;
  if (metric == Metric::f1_ner || metric == Metric::f1_re || metric == Metric::f1_graph) {
    out += "parse failures: " + std::to_string(parse_failures) +
           ", recovered diagnostics: " + std::to_string(parse_diagnostics) + "\n";
  }
  return out;
}

std::string gold_id(const CorpusRecord& record, std::size_t index) {
  auto it = record.meta.find("id");
  return it != record.meta.end() ? it->second : std::to_string(index);
}

MetricReport grade_run(const std::vector<Prediction>& predictions, const std::vector<CorpusRecord>& gold, Metric metric,
                       MatchMode mode, Exec exec) {
  std::unordered_map<std::string, std::size_t> pred_index;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!pred_index.emplace(predictions[i].id, i).second) {
      throw IdMismatch("duplicate prediction id '" + predictions[i].id + "'");
    }
  }
  std::vector<std::string> ids(gold.size());
  std::set<std::string> seen;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ids[i] = gold_id(gold[i], i);
    if (!seen.insert(ids[i]).second) throw IdMismatch("duplicate gold id '" + ids[i] + "'");
    matched += pred_index.count(ids[i]);
  }
  if (matched == 0) throw IdMismatch("predictions and gold share no ids");
  if (matched != gold.size() || matched != predictions.size()) {
    throw IdMismatch(std::to_string(matched) + " shared ids, " + std::to_string(predictions.size()) +
                     " predictions, " + std::to_string(gold.size()) + " gold records");
  }

  MetricReport report;
  report.metric = metric;
  report.count = gold.size();
  auto output_of = [&](std::size_t i) -> const std::string& { return predictions[pred_index.at(ids[i])].output; };

  if (metric == Metric::bleu) {
    std::vector<std::string> cands, refs;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      cands.push_back(output_of(i));
      refs.push_back(gold[i].target);
    }
    auto scores = map_indices<double>(gold.size(), exec, [&](std::size_t i) { return bleu({cands[i]}, {refs[i]}); });
    for (std::size_t i = 0; i < gold.size(); ++i) report.per_example.push_back({ids[i], scores[i]});
    report.value = bleu(cands, refs);
    return report;
  }

  struct Scored {
    double score = 0.0;
    bool failed = false;
    std::size_t diagnostics = 0;
  };
  auto scored = map_indices<Scored>(gold.size(), exec, [&](std::size_t i) -> Scored {
    const std::string& out = output_of(i);
    switch (metric) {
      case Metric::em:
      case Metric::acc: return {exact_match(out, gold[i].target)};
      case Metric::hits1: {
        std::vector<std::string> aliases{gold[i].target};
        if (auto it = gold[i].meta.find("aliases"); it != gold[i].meta.end()) {
          for (auto& a : split_aliases(it->second)) aliases.push_back(std::move(a));
        }
        return {hits_at_1(out, aliases)};
      }
      default: break;
    }
    Graph gold_graph;
    try {
      gold_graph = parse_graph(gold[i].target).graph;
    } catch (const UnparseableGraph& e) {
      throw SchemaError(i + 1, std::string("gold target is not a graph: ") + e.what());
    }
    ParseResult pred;
    try {
      pred = parse_graph(out);
    } catch (const UnparseableGraph&) {
      return {0.0, true, 0};
    }
    const GraphF1 f = graph_f1(pred.graph, gold_graph, mode);
    const double v = metric == Metric::f1_ner ? f.ner.f1 : metric == Metric::f1_re ? f.re.f1 : f.graph.f1;
    return {v, false, pred.recovered_count()};
  });
  for (std::size_t i = 0; i < gold.size(); ++i) {
    report.per_example.push_back({ids[i], scored[i].score});
    report.parse_failures += scored[i].failed ? 1 : 0;
    report.parse_diagnostics += scored[i].diagnostics;
  }
  report.value = mean(report.per_example);
  return report;
}

}  // namespace graphlang
