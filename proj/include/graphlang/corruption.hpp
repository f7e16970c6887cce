#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "graphlang/graph.hpp"
#include "graphlang/parallel.hpp"
#include "graphlang/record.hpp"

namespace graphlang {

enum class EditKind { replace_node, add_node, remove_node, replace_edge, add_edge, remove_edge };

std::string_view to_string(EditKind kind);
std::optional<EditKind> parse_edit_kind(std::string_view text);

using EditItem = std::variant<NodeId, Edge>;

/// One applied edit. Replace ops carry before and after, add ops only
/// after, remove ops only before. The one exception is a conflict edge
/// (add_edge) whose `before` holds the existing triple it contradicts.
struct EditOp {
  EditKind kind = EditKind::add_edge;
  std::optional<EditItem> before;
  std::optional<EditItem> after;

  bool operator==(const EditOp&) const = default;
};

/// Node or edge in verbalizer syntax.
std::string render_item(const EditItem& item, GraphKind kind);

enum class ScenarioFamily { reasoning, generation };

enum class ScenarioKind { correct_graph_wrong_answer, unfactual, conflict, missing, wrong_input, unfaithful };

std::string_view to_string(ScenarioFamily family);
std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioFamily> parse_scenario_family(std::string_view text);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text);

struct Scenario {
  ScenarioFamily family = ScenarioFamily::reasoning;
  ScenarioKind kind = ScenarioKind::correct_graph_wrong_answer;

  /// wrong_input and unfaithful are generation-only,
  /// correct_graph_wrong_answer is reasoning-only.
  bool valid() const;
  bool operator==(const Scenario&) const = default;
};

struct PreferencePair {
  std::string prompt;
  std::string chosen;
  std::string rejected;
  Scenario scenario;
  std::vector<EditOp> edit_log;
  std::string source_task;
  Cluster cluster = Cluster::structure;
  Meta meta;

  bool operator==(const PreferencePair&) const = default;
};

/// Replacement material beyond what the graph itself offers.
struct VocabularyPool {
  std::vector<NodeId> nodes;
  std::vector<std::string> relations;
};

struct EditResult {
  Graph graph;
  std::vector<EditOp> log;
};

/// Applies one edit per entry of `kinds`, in order. New nodes come from the
/// pool (never from the graph itself); structure graphs fall back to the
/// next unused integer. Items added by an earlier edit of the same call are
/// never removed or replaced again, so the result always differs from the
/// input when `kinds` is nonempty.
EditResult edit_graph(const Graph& graph, const std::vector<EditKind>& kinds, std::uint64_t seed,
                      const VocabularyPool& pool = {});

/// Deletes `node` and its incident edges and properties.
EditResult remove_node(const Graph& graph, const NodeId& node);

/// Adds a second edge on the endpoints of a sampled relation triple with a
/// different relation; weighted graphs without relations get a second weight
/// instead.
EditResult make_conflict(const Graph& graph, std::uint64_t seed, const VocabularyPool& pool = {});

/// Replays a log produced by edit_graph/make_conflict/remove_node.
Graph apply_edit_log(const Graph& graph, const std::vector<EditOp>& log);

/// Table-8 refusal for unfactual, conflict and missing scenarios.
std::string render_refusal(const Scenario& scenario, const std::vector<EditOp>& log,
                           GraphKind kind = GraphKind::knowledge);

/// Caption and Graph QA answer to an unfactual graph.
std::string render_corrected_answer(const std::vector<EditOp>& log, const std::string& original,
                                    GraphKind kind = GraphKind::knowledge);

/// Graph QA answer when the answer node was removed.
std::string render_missing_answer(const std::string& original);

struct CorruptionOptions {
  /// Edits per corrupted graph, 1..3.
  int edits = 1;
  VocabularyPool pool;
  /// Edge-edited generation negatives: chosen = edited graph, as in the
  /// original assignment. false swaps chosen and rejected.
  bool literal_ie_assignment = true;
};

PreferencePair make_reasoning_preference(const TaskRecord& record, ScenarioKind kind,
                                         const std::vector<std::string>& answer_pool, std::uint64_t seed,
                                         const CorruptionOptions& options = {});

PreferencePair make_generation_preference(const TaskRecord& record, ScenarioKind kind,
                                          const std::vector<std::string>& input_pool, std::uint64_t seed,
                                          const CorruptionOptions& options = {});

/// Dispatches on the record's cluster.
PreferencePair make_preference(const TaskRecord& record, ScenarioKind kind,
                               const std::vector<std::string>& pool, std::uint64_t seed,
                               const CorruptionOptions& options = {});

struct PreferenceBatch {
  std::vector<PreferencePair> pairs;
  /// Input index and reason of every record that could not be corrupted.
  std::vector<std::pair<std::size_t, std::string>> skipped;
};

/// Record i uses mix_seed(seed, i). The sampling pool of a record holds the
/// targets of all records of the same task.
PreferenceBatch make_preference_batch(const std::vector<TaskRecord>& records, ScenarioKind kind,
                                      std::uint64_t seed, Exec exec, const CorruptionOptions& options = {});

}  // namespace graphlang
