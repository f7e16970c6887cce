#include "graphlang/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "graphlang/corpus.hpp"
#include "graphlang/corruption.hpp"
#include "graphlang/error.hpp"
#include "graphlang/eval.hpp"
#include "graphlang/io.hpp"
#include "graphlang/parallel.hpp"
#include "graphlang/preference.hpp"
#include "graphlang/structure.hpp"
#include "graphlang/verbalizer.hpp"

namespace graphlang {
namespace {

// Raised for flag combinations CLI11 cannot validate on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Log {
 public:
  Log(std::ostream& err, const bool& json) : err_(err), json_(json) {}

  void info(const std::string& message, const Json& fields = Json::object()) const { emit("info", message, fields); }
  void warn(const std::string& message, const Json& fields = Json::object()) const { emit("warn", message, fields); }
  void error(const std::string& message, const Json& fields = Json::object()) const {
    emit("error", message, fields);
  }

 private:
  void emit(const char* level, const std::string& message, const Json& fields) const {
    if (json_) {
      Json line;
      line["level"] = level;
      line["message"] = message;
      for (const auto& [k, v] : fields.items()) line[k] = v;
      err_ << line.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
      return;
    }
    err_ << "graphlang: " << (std::string(level) == "info" ? "" : std::string(level) + ": ") << message;
    for (const auto& [k, v] : fields.items()) err_ << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
    err_ << '\n';
  }

  std::ostream& err_;
  const bool& json_;
};

struct Common {
  std::string config;
  int jobs = 0;
  bool log_json = false;
  std::uint64_t seed = 0;

  Exec exec() const { return jobs == 1 ? Exec::serial : Exec::parallel; }
};

void emit_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
  } else {
    write_text(path, content);
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::istringstream in(read_text(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// key=value lines; '#' starts a comment. Keys use flag spelling without the
// leading dashes; underscores are accepted for dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t number = 0;
  for (const auto& raw : read_lines(path)) {
    ++number;
    const std::string line = trim_copy(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(number) + ": expected key=value");
    std::string key = trim_copy(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    entries.emplace_back(key, trim_copy(line.substr(eq + 1)));
  }
  return entries;
}

bool truthy(const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s == "1" || s == "true" || s == "yes" || s == "on";
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Appends --key value tokens for config entries that the command line does
// not set itself. Keys that belong to neither the selected subcommand nor
// the top level are ignored so one file can serve a whole pipeline.
std::vector<std::string> overlay_config(CLI::App& app, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    if (a.empty() || a[0] == '-') continue;
    try {
      sub = app.get_subcommand(a);
      break;
    } catch (const CLI::OptionNotFound&) {
    }
  }
  for (const auto& [key, value] : read_config(path)) {
    const std::string flag = "--" + key;
    if (key == "config" || given(args, flag)) continue;
    const CLI::Option* opt = sub ? sub->get_option_no_throw(flag) : nullptr;
    if (!opt) opt = app.get_option_no_throw(flag);
    if (!opt) continue;
    if (opt->get_expected_max() == 0) {
      if (truthy(value)) args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

std::uint64_t env_seed() {
  const char* raw = std::getenv("GRAPHLANG_SEED");
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || raw[0] == '-') throw UsageError("GRAPHLANG_SEED must be a non-negative integer");
  return v;
}

// Corpus records carry a "target", task records an "answer".
TaskRecord task_from_any(const Json& j, std::size_t line) {
  if (j.contains("target")) return to_task_record(corpus_record_from_json(j, line));
  return task_record_from_json(j, line);
}

CorpusRecord corpus_from_any(const Json& j, std::size_t line) {
  if (j.contains("target")) return corpus_record_from_json(j, line);
  return assemble(task_record_from_json(j, line));
}

std::vector<TaskRecord> read_any_tasks(const std::string& path) {
  std::vector<TaskRecord> out;
  for (const auto& l : parse_json_lines(read_text(path))) out.push_back(task_from_any(l.value, l.line));
  return out;
}

std::vector<CorpusRecord> read_any_corpus(const std::string& path) {
  std::vector<CorpusRecord> out;
  for (const auto& l : parse_json_lines(read_text(path))) out.push_back(corpus_from_any(l.value, l.line));
  return out;
}

std::string format_number(double v) {
  Json j = v;
  return j.dump();
}

// ---- gen-structure --------------------------------------------------------

struct GenArgs {
  std::string task;
  std::size_t count = 100;
  std::size_t nodes = 8;
  double edge_prob = 0.5;
  bool weighted = false;
  bool directed = false;
  std::int64_t weight_min = 1;
  std::int64_t weight_max = 10;
  std::size_t left = 0;
  std::size_t right = 0;
  std::string out = "-";
};

int cmd_gen_structure(const GenArgs& a, const Common& common, std::ostream& out, const Log& log) {
  const auto task = parse_structure_task(a.task);
  if (!task) throw UsageError("unknown task '" + a.task + "'");
  if (*task == StructureTask::shortest_path && !a.weighted) {
    throw UsageError("shortest-path answers are path weights; pass --weighted (and optionally --weight-min/--weight-max)");
  }
  RandomGraphSpec spec;
  spec.num_nodes = a.nodes;
  spec.edge_probability = a.edge_prob;
  spec.directed = a.directed;
  spec.weighted = a.weighted;
  spec.weight_range = {a.weight_min, a.weight_max};
  if (a.left > 0 || a.right > 0) spec.bipartite = Bipartition{a.left, a.right};
  try {
    spec.check();
    if (a.count > 0) gen_structure_task(*task, spec, common.seed);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  } catch (const InstanceTooLarge& e) {
    throw UsageError(e.what());
  }

  auto records = gen_structure_batch(*task, spec, common.seed, a.count, common.exec());
  std::vector<Json> lines;
  lines.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].meta["id"] = std::string(to_string(*task)) + "-" + std::to_string(i);
    lines.push_back(to_json(assemble(records[i])));
  }
  emit_output(a.out, dump_json_lines(lines), out);
  log.info("generated " + std::to_string(records.size()) + " " + std::string(to_string(*task)) + " records",
           {{"records", records.size()}, {"task", to_string(*task)}, {"seed", common.seed}});
  return kExitOk;
}

// ---- verbalize / parse ----------------------------------------------------

struct VerbalizeArgs {
  std::string in = "-";
  std::string out = "-";
  std::string style = "auto";
  std::string graph_name;
  bool no_properties = false;
};

int cmd_verbalize(const VerbalizeArgs& a, std::ostream& out, const Log& log) {
  std::vector<Json> lines;
  std::size_t with_graph = 0;
  for (const auto& l : parse_json_lines(read_text(a.in))) {
    TaskRecord r = task_from_any(l.value, l.line);
    Json j = to_json(r);
    if (r.graph) {
      VerbalStyle style = VerbalStyle::for_graph(*r.graph);
      if (a.style == "node") style.vocabulary = Vocabulary::node;
      if (a.style == "entity") style.vocabulary = Vocabulary::entity;
      if (!a.graph_name.empty()) style.graph_name = a.graph_name;
      style.include_properties = !a.no_properties;
      j["graph_text"] = verbalize(*r.graph, style);
      ++with_graph;
    }
    lines.push_back(std::move(j));
  }
  emit_output(a.out, dump_json_lines(lines), out);
  log.info("verbalized " + std::to_string(with_graph) + " graphs", {{"records", lines.size()}});
  return kExitOk;
}

struct ParseArgs {
  std::string in = "-";
  std::string out = "-";
  std::string field = "output";
  bool strict = false;
};

Json diagnostics_json(const ParseResult& r) {
  Json list = Json::array();
  for (const auto& d : r.diagnostics) {
    list.push_back({{"line", d.position.line},
                    {"column", d.position.column},
                    {"message", d.message},
                    {"recovered", d.recovered}});
  }
  return list;
}

int cmd_parse(const ParseArgs& a, std::ostream& out, const Log& log) {
  const std::string text = read_text(a.in);
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool jsonl = first != std::string::npos && text[first] == '{';

  // (record line, id, graph text); a raw file is a single record on line 1.
  struct Item {
    std::size_t line;
    Json id;
    std::string text;
  };
  std::vector<Item> items;
  if (jsonl) {
    for (const auto& l : parse_json_lines(text)) {
      const auto it = l.value.find(a.field);
      if (it == l.value.end() || !it->is_string()) {
        throw SchemaError(l.line, "missing string field \"" + a.field + "\"");
      }
      Json id = l.value.contains("id") ? l.value["id"] : Json(l.line - 1);
      if (id.is_null()) id = l.line - 1;
      if (l.value.contains("meta") && l.value["meta"].is_object() && l.value["meta"].contains("id")) {
        id = l.value["meta"]["id"];
      }
      items.push_back({l.line, id, it->get<std::string>()});
    }
  } else {
    items.push_back({1, Json(0), text});
  }

  std::vector<Json> lines;
  std::size_t failures = 0, recovered = 0;
  for (const auto& item : items) {
    const std::string where = jsonl ? "record line " + std::to_string(item.line) : a.in;
    Json j;
    j["id"] = item.id;
    try {
      ParseResult r = parse_graph(item.text);
      for (const auto& d : r.diagnostics) {
        log.warn(where + ": " + std::to_string(d.position.line) + ":" + std::to_string(d.position.column) + ": " +
                     d.message,
                 {{"record_line", item.line}, {"recovered", d.recovered}});
      }
      const std::size_t repaired = r.recovered_count();
      if (a.strict && repaired > 0) {
        log.error(where + ": " + std::to_string(repaired) + " recovered diagnostic(s) in strict mode",
                  {{"record_line", item.line}});
        return kExitFailure;
      }
      recovered += repaired;
      j["graph"] = graph_to_json(r.graph);
      j["diagnostics"] = diagnostics_json(r);
    } catch (const UnparseableGraph& e) {
      log.error(where + ": " + e.what(), {{"record_line", item.line}});
      if (a.strict) return kExitFailure;
      ++failures;
      j["graph"] = nullptr;
      j["error"] = e.what();
    }
    lines.push_back(std::move(j));
  }
  emit_output(a.out, dump_json_lines(lines), out);
  log.info("parsed " + std::to_string(items.size() - failures) + " of " + std::to_string(items.size()) + " graphs",
           {{"failures", failures}, {"recovered", recovered}});
  return kExitOk;
}

// ---- corrupt --------------------------------------------------------------

struct CorruptArgs {
  std::string in = "-";
  std::string out = "-";
  std::string scenario;
  int edits = 1;
  std::string node_pool;
  std::string relation_pool;
  bool invert_ie = false;
};

int cmd_corrupt(const CorruptArgs& a, const Common& common, std::ostream& out, const Log& log) {
  const auto kind = parse_scenario_kind(a.scenario);
  if (!kind) throw UsageError("unknown scenario '" + a.scenario + "'");
  CorruptionOptions options;
  options.edits = a.edits;
  options.literal_ie_assignment = !a.invert_ie;
  if (!a.node_pool.empty()) options.pool.nodes = read_lines(a.node_pool);
  if (!a.relation_pool.empty()) options.pool.relations = read_lines(a.relation_pool);

  const auto records = read_any_tasks(a.in);
  PreferenceBatch batch = make_preference_batch(records, *kind, common.seed, common.exec(), options);
  for (const auto& [index, reason] : batch.skipped) {
    log.warn("record " + std::to_string(index + 1) + " skipped: " + reason, {{"record", index + 1}});
  }
  std::vector<Json> lines;
  lines.reserve(batch.pairs.size());
  for (const auto& p : batch.pairs) lines.push_back(to_json(p));
  emit_output(a.out, dump_json_lines(lines), out);
  log.info("wrote " + std::to_string(batch.pairs.size()) + " preference pairs",
           {{"pairs", batch.pairs.size()}, {"skipped", batch.skipped.size()}, {"scenario", to_string(*kind)}});
  if (!records.empty() && batch.pairs.empty()) {
    log.error("every record failed to corrupt");
    return kExitFailure;
  }
  return kExitOk;
}

// ---- corpus assembly ------------------------------------------------------

struct AssembleArgs {
  std::string in = "-";
  std::string out = "-";
  std::string sample = "all";
  std::size_t count = 0;
};

int cmd_assemble(const AssembleArgs& a, const Common& common, std::ostream& out, const Log& log) {
  SamplingRule rule;
  if (a.sample == "all") {
    rule.policy = SamplingPolicy::all;
  } else if (a.sample == "up") {
    rule.policy = SamplingPolicy::up;
  } else if (a.sample == "down") {
    rule.policy = SamplingPolicy::down;
  } else {
    throw UsageError("--sample must be all, up or down");
  }
  rule.target_count = a.count;
  if (rule.policy != SamplingPolicy::all && a.count == 0) throw UsageError("--sample up/down needs --count > 0");

  const auto records = read_any_corpus(a.in);
  const auto picked = sample_split(records, rule, common.seed);
  std::vector<Json> lines;
  lines.reserve(picked.size());
  for (const auto& r : picked) lines.push_back(to_json(r));
  emit_output(a.out, dump_json_lines(lines), out);
  log.info("assembled " + std::to_string(picked.size()) + " records", {{"input", records.size()}});
  return kExitOk;
}

// ---- dpo / ppl-acc --------------------------------------------------------

int cmd_dpo(const std::string& quads_path, double beta, const Common& common, std::ostream& out, const Log& log) {
  const auto quads = read_quads_jsonl(quads_path);
  const double loss = dpo_loss(quads, beta, common.exec());
  std::vector<double> margins(quads.size());
  for (std::size_t i = 0; i < quads.size(); ++i) margins[i] = bt_margin(quads[i], beta);
  Json j;
  j["loss"] = loss;
  j["mean_margin"] = pairwise_sum(margins) / static_cast<double>(margins.size());
  j["beta"] = beta;
  j["count"] = quads.size();
  out << j.dump() << '\n';
  log.info("dpo loss " + format_number(loss), {{"count", quads.size()}});
  return kExitOk;
}

int cmd_ppl_acc(const std::string& pairs_path, const Common& common, std::ostream& out, const Log& log) {
  const auto pairs = read_token_pairs_jsonl(pairs_path);
  const double acc = preference_accuracy(pairs, common.exec());
  Json j;
  j["accuracy"] = acc;
  j["count"] = pairs.size();
  out << j.dump() << '\n';
  log.info("preference accuracy " + format_number(acc), {{"count", pairs.size()}});
  return kExitOk;
}

// ---- grade ----------------------------------------------------------------

struct GradeArgs {
  std::string pred;
  std::string gold;
  std::string metric = "em";
  std::string report;
  bool exact = false;
};

int cmd_grade(const GradeArgs& a, const Common& common, std::ostream& out, const Log& log) {
  const auto metric = parse_metric(a.metric);
  if (!metric) throw UsageError("unknown metric '" + a.metric + "'");
  const auto preds = read_predictions_jsonl(a.pred);
  const auto gold = read_any_corpus(a.gold);
  const MetricReport report =
      grade_run(preds, gold, *metric, a.exact ? MatchMode::exact : MatchMode::normalized, common.exec());
  if (!a.report.empty() && a.report != "-") write_text(a.report, report.to_json() + "\n");
  if (a.report == "-") {
    out << report.to_json() << '\n';
  } else {
    out << report.to_table();
  }
  log.info(std::string(to_string(*metric)) + " " + format_number(report.value),
           {{"count", report.count}, {"parse_failures", report.parse_failures}});
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Common common;
  Log log(err, common.log_json);

  CLI::App app{"Graph verbalization, structure tasks, corruption and preference tooling", "graphlang"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Exit codes: 0 success, 1 runtime failure, 2 usage error.\n"
             "GRAPHLANG_SEED sets the default --seed. Paths may be - for stdin/stdout.");
  app.add_option("--config", common.config, "key=value file; command-line flags take precedence");
  app.add_option("--jobs", common.jobs, "Worker threads; 1 runs the serial reference path, 0 uses all cores")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--log-json", common.log_json, "Write logs to stderr as JSON lines");

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "RNG seed (default: $GRAPHLANG_SEED, else 0)");
  };

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-structure", "Generate structure-task records as corpus JSONL");
  gen_cmd->add_option("--task", gen.task, "connectivity, cycle, hamilton, bipartite-edge, shortest-path, degree, "
                                          "structure-generation")
      ->required();
  gen_cmd->add_option("--count", gen.count, "Records to generate")->capture_default_str();
  gen_cmd->add_option("--nodes", gen.nodes, "Nodes per graph")->capture_default_str();
  gen_cmd->add_option("--edge-prob", gen.edge_prob, "Probability of each candidate edge")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_flag("--weighted", gen.weighted, "Sample integer edge weights (required for shortest-path)");
  gen_cmd->add_flag("--directed", gen.directed, "Sample directed edges");
  gen_cmd->add_option("--weight-min", gen.weight_min, "Smallest edge weight")->capture_default_str();
  gen_cmd->add_option("--weight-max", gen.weight_max, "Largest edge weight")->capture_default_str();
  gen_cmd->add_option("--left", gen.left, "Left part size for bipartite graphs")->capture_default_str();
  gen_cmd->add_option("--right", gen.right, "Right part size for bipartite graphs")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output JSONL, - for stdout")->capture_default_str();
  add_seed(gen_cmd);

  VerbalizeArgs verb;
  auto* verb_cmd = app.add_subcommand("verbalize", "Render record graphs into graph_text fields");
  verb_cmd->add_option("--in", verb.in, "Task or corpus JSONL with graphs")->capture_default_str();
  verb_cmd->add_option("--out", verb.out, "Output task JSONL")->capture_default_str();
  verb_cmd->add_option("--style", verb.style, "auto (from the graph kind), node or entity")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "node", "entity"}));
  verb_cmd->add_option("--graph-name", verb.graph_name, "Override the rendered graph name");
  verb_cmd->add_flag("--no-properties", verb.no_properties, "Omit node property statements");

  ParseArgs parse;
  auto* parse_cmd = app.add_subcommand("parse", "Parse verbalized graphs back into graph objects");
  parse_cmd->add_option("--in", parse.in, "JSONL records, or a raw graph text file")->capture_default_str();
  parse_cmd->add_option("--out", parse.out, "Output JSONL of parsed graphs and diagnostics")->capture_default_str();
  parse_cmd->add_option("--field", parse.field, "JSONL field holding the graph text")->capture_default_str();
  parse_cmd->add_flag("--strict", parse.strict, "Fail on the first record that needed repair or did not parse");

  CorruptArgs corrupt;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Build chosen/rejected preference pairs");
  corrupt_cmd->add_option("--in", corrupt.in, "Task or corpus JSONL")->capture_default_str();
  corrupt_cmd->add_option("--out", corrupt.out, "Output preference JSONL")->capture_default_str();
  corrupt_cmd->add_option("--scenario", corrupt.scenario, "correct-graph-wrong-answer, unfactual, conflict, missing, "
                                                          "wrong-input or unfaithful")
      ->required();
  corrupt_cmd->add_option("--edits", corrupt.edits, "Edits per corrupted graph")
      ->capture_default_str()
      ->check(CLI::Range(1, 3));
  corrupt_cmd->add_option("--node-pool", corrupt.node_pool, "File of replacement node names, one per line");
  corrupt_cmd->add_option("--relation-pool", corrupt.relation_pool, "File of replacement relations, one per line");
  corrupt_cmd->add_flag("--invert-ie", corrupt.invert_ie,
                        "For edge-edited generation pairs, keep the original graph as chosen");
  add_seed(corrupt_cmd);

  AssembleArgs asm_args;
  auto* asm_cmd = app.add_subcommand("assemble", "Compose prompts/targets and resample a corpus");
  asm_cmd->add_option("--in", asm_args.in, "Task or corpus JSONL")->capture_default_str();
  asm_cmd->add_option("--out", asm_args.out, "Output corpus JSONL")->capture_default_str();
  asm_cmd->add_option("--sample", asm_args.sample, "all, up or down")->capture_default_str();
  asm_cmd->add_option("--count", asm_args.count, "Target record count for up/down sampling")->capture_default_str();
  add_seed(asm_cmd);

  std::string quads_path;
  double beta = 0.1;
  auto* dpo_cmd = app.add_subcommand("dpo", "Preference loss over log-probability quads");
  dpo_cmd->add_option("--quads", quads_path, "JSONL of {id, policy_chosen, policy_rejected, ref_chosen, ref_rejected}")
      ->required();
  dpo_cmd->add_option("--beta", beta, "Inverse temperature, > 0")->capture_default_str();

  std::string pairs_path;
  auto* ppl_cmd = app.add_subcommand("ppl-acc", "Accuracy of perplexity-based preference selection");
  ppl_cmd->add_option("--pairs", pairs_path, "JSONL of {id, chosen_token_logprobs, rejected_token_logprobs}")
      ->required();

  GradeArgs grade;
  auto* grade_cmd = app.add_subcommand("grade", "Score predictions against gold records");
  grade_cmd->add_option("--pred", grade.pred, "JSONL of {id, output}")->required();
  grade_cmd->add_option("--gold", grade.gold, "Gold corpus or task JSONL")->required();
  grade_cmd->add_option("--metric", grade.metric, "em, acc, hits@1, bleu, f1-ner, f1-re or f1-graph")
      ->capture_default_str();
  grade_cmd->add_option("--report", grade.report, "Write the JSON report here (- prints it instead of the table)");
  grade_cmd->add_flag("--exact", grade.exact, "Compare graph items without normalization");

  try {
    common.seed = env_seed();
    std::vector<std::string> argv = overlay_config(app, args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "graphlang: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "graphlang: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    set_jobs(common.jobs);
    if (*gen_cmd) return cmd_gen_structure(gen, common, out, log);
    if (*verb_cmd) return cmd_verbalize(verb, out, log);
    if (*parse_cmd) return cmd_parse(parse, out, log);
    if (*corrupt_cmd) return cmd_corrupt(corrupt, common, out, log);
    if (*asm_cmd) return cmd_assemble(asm_args, common, out, log);
    if (*dpo_cmd) {
      if (!(beta > 0.0) || !std::isfinite(beta)) throw UsageError("--beta must be a finite number > 0");
      return cmd_dpo(quads_path, beta, common, out, log);
    }
    if (*ppl_cmd) return cmd_ppl_acc(pairs_path, common, out, log);
    if (*grade_cmd) return cmd_grade(grade, common, out, log);
  } catch (const UsageError& e) {
    log.error(e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    log.error(e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace graphlang
