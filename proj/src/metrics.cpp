#include "guiagent/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "text_util.hpp"

namespace guiagent {

using nlohmann::json;

std::string_view category_name(Category c) {
  return c == Category::Text ? "TEXT" : "ICON_WIDGET";
}

std::string_view platform_name(Platform p) {
  switch (p) {
    case Platform::Mobile: return "MOBILE";
    case Platform::Desktop: return "DESKTOP";
    case Platform::Web: return "WEB";
  }
  return "WEB";
}

bool element_accuracy(std::optional<NormalizedPoint> pred, const OfflineStepRecord& rec) {
  if (!pred) return false;
  return std::any_of(rec.acceptable_bboxes.begin(), rec.acceptable_bboxes.end(),
                     [&](const Box& b) { return point_in_bbox(*pred, b); });
}

double token_f1(std::string_view pred, std::string_view gt) {
  std::vector<std::string> p = text::split_ws(text::to_lower(pred));
  std::vector<std::string> g = text::split_ws(text::to_lower(gt));
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::sort(p.begin(), p.end());
  std::sort(g.begin(), g.end());
  std::size_t overlap = 0;
  for (auto i = p.begin(), j = g.begin(); i != p.end() && j != g.end();) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++overlap;
      ++i;
      ++j;
    }
  }
  if (overlap == 0) return 0.0;
  // 2PR / (P + R) with P = o/|p|, R = o/|g| reduces to 2o / (|p| + |g|).
  return 2.0 * static_cast<double>(overlap) / static_cast<double>(p.size() + g.size());
}

double op_f1(std::string_view pred_op, const std::optional<std::string>& pred_value,
             std::string_view gt_op, const std::optional<std::string>& gt_value) {
  auto joined = [](std::string_view op, const std::optional<std::string>& v) {
    std::string s(op);
    if (v) s += " " + *v;
    return s;
  };
  return token_f1(joined(pred_op, pred_value), joined(gt_op, gt_value));
}

bool step_success(std::optional<NormalizedPoint> pred, std::string_view pred_op,
                  const std::optional<std::string>& pred_value, const OfflineStepRecord& rec) {
  if (!element_accuracy(pred, rec)) return false;
  const auto op = parse_op(pred_op);
  if (!op || *op != rec.gt_operation) return false;
  if (value_arity(rec.gt_operation) == ValueArity::None) return true;
  if (!pred_value || !rec.gt_value) return false;
  return text::to_lower(text::trim(*pred_value)) == text::to_lower(text::trim(*rec.gt_value));
}

int sequence_score(std::span<const OpKind> pred, std::span<const OpKind> gt) {
  return std::equal(pred.begin(), pred.end(), gt.begin(), gt.end()) ? 1 : 0;
}

double click_penalty(std::optional<NormalizedPoint> pred, const Box& gt) {
  if (!pred) return 1.0;
  if (point_in_bbox(*pred, gt)) return 0.0;
  const double dx = std::max({gt.x0 - pred->x, 0.0, pred->x - gt.x1});
  const double dy = std::max({gt.y0 - pred->y, 0.0, pred->y - gt.y1});
  return std::min(1.0, std::hypot(dx, dy) / std::sqrt(2.0));
}

OmniScore score_omni_record(const OmniRecord& rec) {
  OmniScore s;
  s.seq_score = sequence_score(rec.pred_sequence, rec.gt_sequence);
  if (rec.gt_sequence.empty()) return s;
  const double scale = 1.0 / static_cast<double>(rec.gt_sequence.size());

  for (std::size_t j = 0; j < rec.gt_sequence.size(); ++j) {
    const int index = static_cast<int>(j);
    double m = 0, k = 0, w = 0;
    for (const auto& [gi, box] : rec.gt_clicks) {
      if (gi != index) continue;
      std::optional<NormalizedPoint> pred;
      for (const auto& [pi, p] : rec.pred_clicks) {
        if (pi == index) {
          pred = p;
          break;
        }
      }
      m += scale * click_penalty(pred, box);
    }
    for (const auto& [gi, gt_value] : rec.gt_values) {
      if (gi != index) continue;
      std::optional<std::string> pred_value;
      for (const auto& [pi, v] : rec.pred_values) {
        if (pi == index) {
          pred_value = v;
          break;
        }
      }
      const OpKind gt_op = rec.gt_sequence[j];
      const std::string_view pred_op = j < rec.pred_sequence.size() ? op_name(rec.pred_sequence[j]) : "";
      const double miss = scale * (1.0 - op_f1(pred_op, pred_value, op_name(gt_op), gt_value));
      (gt_op == OpKind::Hotkey ? k : w) += miss;
    }
    s.click += m;
    s.key += k;
    s.write += w;
    s.penalty += m + k + w;
  }
  return s;
}

ActionScoreResult action_score(std::span<const OmniScore> records) {
  ActionScoreResult r;
  double numerator = 0;
  double denominator = 0;
  for (const OmniScore& s : records) {
    if (s.seq_score == 0) continue;
    numerator += std::max(static_cast<double>(s.seq_score) - s.total(), 0.0);
    denominator += s.seq_score;
    r.click_penalty += s.click;
    r.key_penalty += s.key;
    r.write_penalty += s.write;
    ++r.matched;
  }
  if (denominator == 0) throw MetricError("action score undefined: no matched sequences");
  r.action_score = numerator / denominator;
  const auto m = static_cast<double>(r.matched);
  r.click_penalty /= m;
  r.key_penalty /= m;
  r.write_penalty /= m;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_plus(const std::string& key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto plus = key.find('+', start);
    out.push_back(key.substr(start, plus - start));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return out;
}

MetricValues fold(const std::vector<const RecordResult*>& rows) {
  MetricValues v;
  v.n = rows.size();
  std::size_t hits_n = 0, hits = 0, f1_n = 0, sr_n = 0, sr = 0, seq_n = 0, seq = 0;
  double f1_sum = 0;
  std::vector<OmniScore> omni;
  for (const RecordResult* r : rows) {
    if (r->element_hit) {
      ++hits_n;
      hits += *r->element_hit ? 1 : 0;
    }
    if (r->op_f1) {
      ++f1_n;
      f1_sum += *r->op_f1;
    }
    if (r->step_success) {
      ++sr_n;
      sr += *r->step_success ? 1 : 0;
    }
    if (r->omni) {
      ++seq_n;
      seq += static_cast<std::size_t>(r->omni->seq_score);
      omni.push_back(*r->omni);
    }
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
  };
  if (hits_n) v.ele_acc = ratio(hits, hits_n);
  if (f1_n) v.op_f1 = f1_sum / static_cast<double>(f1_n);
  if (sr_n) v.step_sr = ratio(sr, sr_n);
  if (seq_n) v.seq_score = ratio(seq, seq_n);
  if (seq > 0) {
    const ActionScoreResult as = action_score(omni);
    v.action_score = as.action_score;
    v.click_penalty = as.click_penalty;
    v.key_penalty = as.key_penalty;
    v.write_penalty = as.write_penalty;
  }
  return v;
}

}  // namespace

MetricReport aggregate_report(std::vector<RecordResult> records,
                              const std::vector<std::string>& slice_keys) {
  std::stable_sort(records.begin(), records.end(),
                   [](const RecordResult& a, const RecordResult& b) { return a.id < b.id; });
  MetricReport report;
  std::vector<const RecordResult*> all;
  all.reserve(records.size());
  for (const auto& r : records) all.push_back(&r);
  report.overall = fold(all);

  std::map<std::string, std::vector<const RecordResult*>> groups;
  for (const std::string& key : slice_keys) {
    const std::vector<std::string> dims = split_plus(key);
    for (const RecordResult* r : all) {
      std::string row;
      bool complete = true;
      for (const std::string& d : dims) {
        auto it = r->slices.find(d);
        if (it == r->slices.end() || it->second.empty()) {
          complete = false;
          break;
        }
        if (!row.empty()) row += "+";
        row += d + "=" + it->second;
      }
      if (complete) groups[row].push_back(r);
    }
  }
  for (const auto& [row, members] : groups) report.slices.emplace_back(row, fold(members));
  report.per_record = std::move(records);
  return report;
}

json metric_values_to_json(const MetricValues& v) {
  auto opt = [](const std::optional<double>& d) { return d ? json(*d) : json(nullptr); };
  return {{"n", v.n},
          {"ele_acc", opt(v.ele_acc)},
          {"op_f1", opt(v.op_f1)},
          {"step_sr", opt(v.step_sr)},
          {"seq_score", opt(v.seq_score)},
          {"action_score", opt(v.action_score)},
          {"click_penalty", opt(v.click_penalty)},
          {"key_penalty", opt(v.key_penalty)},
          {"write_penalty", opt(v.write_penalty)}};
}

json report_summary_json(const MetricReport& r) {
  json j = metric_values_to_json(r.overall);
  json slices = json::object();
  for (const auto& [key, values] : r.slices) slices[key] = metric_values_to_json(values);
  j["slices"] = slices;
  return j;
}

json record_result_to_json(const RecordResult& r) {
  json j = {{"id", r.id}, {"slices", r.slices}};
  j["element_hit"] = r.element_hit ? json(*r.element_hit) : json(nullptr);
  j["op_f1"] = r.op_f1 ? json(*r.op_f1) : json(nullptr);
  j["step_success"] = r.step_success ? json(*r.step_success) : json(nullptr);
  if (r.omni) {
    j["seq_score"] = r.omni->seq_score;
    j["click_penalty"] = r.omni->click;
    j["key_penalty"] = r.omni->key;
    j["write_penalty"] = r.omni->write;
    j["penalty"] = r.omni->penalty;
  }
  j["detail"] = r.detail;
  return j;
}

}  // namespace guiagent
