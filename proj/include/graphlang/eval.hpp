#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphlang/graph.hpp"
#include "graphlang/parallel.hpp"
#include "graphlang/record.hpp"

namespace graphlang {

/// Lowercase, collapse whitespace runs to one space, trim, and strip
/// trailing punctuation (. , ! ? ; :).
std::string normalize(std::string_view text);

double exact_match(std::string_view pred, std::string_view gold);

/// Throws EmptyGoldSet.
double hits_at_1(std::string_view pred, const std::vector<std::string>& gold_set);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Set-overlap precision/recall/F1; empty against empty scores 1.
F1Score f1_from_counts(std::size_t hits, std::size_t predicted, std::size_t gold);

struct GraphF1 {
  F1Score ner;
  F1Score re;
  F1Score graph;
};

enum class MatchMode { normalized, exact };

/// NER over node names, RE over (source, relation, target) triples, graph
/// over both item kinds together.
GraphF1 graph_f1(const Graph& pred, const Graph& gold, MatchMode mode = MatchMode::normalized);

/// Lowercased tokens with punctuation split off as separate tokens.
std::vector<std::string> bleu_tokenize(std::string_view text);

/// Corpus BLEU-4 with brevity penalty. Orders 2..4 with no match are
/// smoothed to (0+1)/(total+1). Throws LengthMismatch, EmptyInput.
double bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references);

enum class Metric { em, acc, hits1, bleu, f1_ner, f1_re, f1_graph };

std::string_view to_string(Metric metric);
/// Accepts em, acc, hits@1/hits1, bleu, f1-ner, f1-re, f1-graph (and
/// underscore spellings).
std::optional<Metric> parse_metric(std::string_view text);

struct Prediction {
  std::string id;
  std::string output;
};

struct ExampleScore {
  std::string id;
  double score = 0.0;
};

struct MetricReport {
  Metric metric = Metric::em;
  double value = 0.0;
  std::size_t count = 0;
  std::vector<ExampleScore> per_example;
  /// Graph metrics only.
  std::size_t parse_failures = 0;
  std::size_t parse_diagnostics = 0;

  std::string to_json() const;
  std::string to_table() const;
};

/// Gold id: meta "id" when present, else the record's 0-based position.
std::string gold_id(const CorpusRecord& record, std::size_t index);

/// Scores predictions against id-aligned gold records. BLEU is corpus-level;
/// every other metric is the mean of per-example scores. Extra gold aliases
/// for hits@1 come from meta "aliases", separated by '|'. Throws IdMismatch
/// unless both sides carry the same id set.
MetricReport grade_run(const std::vector<Prediction>& predictions, const std::vector<CorpusRecord>& gold,
                       Metric metric, MatchMode mode = MatchMode::normalized, Exec exec = Exec::parallel);

}  // namespace graphlang
