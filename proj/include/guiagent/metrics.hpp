#pragma once

// Grounding and agent-benchmark metrics: element accuracy, token-level
// operation F1, step success, sequence score, click/key/write penalties and
// the matched-sequence action score.

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "guiagent/geometry.hpp"
#include "json.hpp"

namespace guiagent {

enum class Category { Text, IconWidget };
enum class Platform { Mobile, Desktop, Web };
std::string_view category_name(Category c);
std::string_view platform_name(Platform p);

struct GroundingRecord {
  std::string id;
  std::string image;
  std::string description;
  Box bbox;
  Category category = Category::Text;
  Platform platform = Platform::Web;
};

struct OfflineStepRecord {
  std::string id;
  std::string image;
  std::vector<Box> acceptable_bboxes;
  OpKind gt_operation = OpKind::Click;
  std::optional<std::string> gt_value;
  // Optional context for replaying through an interpreter.
  std::string trajectory_id;
  int step_index = 0;
  std::string task;
  std::string gt_description;
  std::string split;
};

struct OmniRecord {
  std::string id;
  std::vector<OpKind> gt_sequence;
  std::vector<std::pair<int, Box>> gt_clicks;
  std::vector<std::pair<int, std::string>> gt_values;
  std::vector<OpKind> pred_sequence;
  std::vector<std::pair<int, NormalizedPoint>> pred_clicks;
  std::vector<std::pair<int, std::string>> pred_values;
  std::string split;
};

class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- per-step metrics -------------------------------------------------------

/// Hit in any acceptable bbox; an absent point never hits.
bool element_accuracy(std::optional<NormalizedPoint> pred, const OfflineStepRecord& rec);

/// Lowercased whitespace tokens of "op value"; F1 over token multisets,
/// 1.0 when both sides are empty.
double op_f1(std::string_view pred_op, const std::optional<std::string>& pred_value,
             std::string_view gt_op, const std::optional<std::string>& gt_value);
/// F1 over the same tokenization applied to bare strings.
double token_f1(std::string_view pred, std::string_view gt);

/// Element hit, same operation kind, and for value-taking ground truth the
/// values agree after lowercasing and trimming.
bool step_success(std::optional<NormalizedPoint> pred, std::string_view pred_op,
                  const std::optional<std::string>& pred_value, const OfflineStepRecord& rec);

int sequence_score(std::span<const OpKind> pred, std::span<const OpKind> gt);

/// 0 inside the box, else min(1, distance to the box / sqrt(2)). An absent
/// point scores 1.
double click_penalty(std::optional<NormalizedPoint> pred, const Box& gt);

// --- action score -----------------------------------------------------------

struct OmniScore {
  int seq_score = 0;
  double click = 0, key = 0, write = 0;  // M_i, K_i, W_i
  double penalty = 0;                     // sum over steps of m + k + w
  double total() const noexcept { return penalty; }
};

/// Per-step penalties are scaled by 1/len(gt_sequence): click steps use
/// click_penalty; value steps use 1 - op_f1 of the step, counted as K for
/// HOTKEY and W otherwise.
OmniScore score_omni_record(const OmniRecord& rec);

struct ActionScoreResult {
  double action_score = 0;
  double click_penalty = 0, key_penalty = 0, write_penalty = 0;  // means over matched records
  std::size_t matched = 0;
};

/// sum_i max(SeqScore_i - p_i, 0) / sum_i SeqScore_i. Records with SeqScore 0
/// contribute neither score nor penalty. Throws MetricError when nothing
/// matched.
ActionScoreResult action_score(std::span<const OmniScore> records);

// --- reports ----------------------------------------------------------------

struct RecordResult {
  std::string id;
  std::map<std::string, std::string> slices;
  std::optional<bool> element_hit;
  std::optional<double> op_f1;
  std::optional<bool> step_success;
  std::optional<OmniScore> omni;
  nlohmann::json detail = nlohmann::json::object();
};

struct MetricValues {
  std::size_t n = 0;
  std::optional<double> ele_acc, op_f1, step_sr, seq_score, action_score;
  std::optional<double> click_penalty, key_penalty, write_penalty;
};

struct MetricReport {
  MetricValues overall;
  std::vector<std::pair<std::string, MetricValues>> slices;  // sorted by key
  std::vector<RecordResult> per_record;                       // sorted by id
};

/// Order-independent: records are sorted by id before folding. Each slice
/// key is a slice dimension ("platform") or a '+'-joined combination
/// ("platform+category"); rows are named like "platform=WEB+category=TEXT".
MetricReport aggregate_report(std::vector<RecordResult> records,
                              const std::vector<std::string>& slice_keys);

nlohmann::json metric_values_to_json(const MetricValues& v);
nlohmann::json report_summary_json(const MetricReport& r);
nlohmann::json record_result_to_json(const RecordResult& r);

}  // namespace guiagent
