#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphlang/corruption.hpp"
#include "graphlang/eval.hpp"
#include "graphlang/graph.hpp"
#include "graphlang/preference.hpp"
#include "graphlang/record.hpp"

namespace graphlang {

using Json = nlohmann::ordered_json;

/// Whole file, or stdin for "-". Throws IoError.
std::string read_text(const std::string& path);
/// Whole file, or stdout for "-". Throws IoError.
void write_text(const std::string& path, const std::string& content);

struct JsonLine {
  std::size_t line = 0;
  Json value;
};

/// Parses one JSON object per non-blank line. Throws SchemaError with the
/// 1-based line number of the first malformed line.
std::vector<JsonLine> parse_json_lines(const std::string& text);

/// One compact JSON document per line, each terminated by '\n'.
std::string dump_json_lines(const std::vector<Json>& values);

/// Exact text form of a weight: the decimal rendering when it reads back
/// to the same value, otherwise "num/den".
std::string exact_weight(const Rational& weight);

Json graph_to_json(const Graph& graph);
Graph graph_from_json(const Json& j, std::size_t line);

Json to_json(const CorpusRecord& record);
CorpusRecord corpus_record_from_json(const Json& j, std::size_t line);

/// Ingestion form: graph either as "graph_text" or as a structured "graph"
/// object. to_json writes "graph_text".
Json to_json(const TaskRecord& record);
TaskRecord task_record_from_json(const Json& j, std::size_t line);

Json to_json(const PreferencePair& pair);
PreferencePair preference_from_json(const Json& j, std::size_t line);

LogProbQuad quad_from_json(const Json& j, std::size_t line);
TokenPair token_pair_from_json(const Json& j, std::size_t line);
Prediction prediction_from_json(const Json& j, std::size_t line);

std::vector<CorpusRecord> read_corpus_jsonl(const std::string& path);
void write_corpus_jsonl(const std::string& path, const std::vector<CorpusRecord>& records);
std::vector<TaskRecord> read_task_jsonl(const std::string& path);
void write_task_jsonl(const std::string& path, const std::vector<TaskRecord>& records);
std::vector<PreferencePair> read_preference_jsonl(const std::string& path);
void write_preference_jsonl(const std::string& path, const std::vector<PreferencePair>& pairs);
std::vector<LogProbQuad> read_quads_jsonl(const std::string& path);
std::vector<TokenPair> read_token_pairs_jsonl(const std::string& path);
std::vector<Prediction> read_predictions_jsonl(const std::string& path);

}  // namespace graphlang
