#include "guiagent/evaluation.hpp"

#include <algorithm>
#include <iostream>
#include <limits>
#include <map>

#include "guiagent/agent.hpp"
#include "guiagent/kernels.hpp"
#include "guiagent/records.hpp"
#include "guiagent/util.hpp"

namespace guiagent {

using nlohmann::json;

namespace {

json point_json(NormalizedPoint p) { return {{"x", p.x}, {"y", p.y}}; }

json located_json(const LocatedPoint& lp) {
  json j = point_json(lp.point);
  j["fallback"] = lp.fallback;
  j["pixel_space"] = lp.pixel_space;
  j["family"] = lp.raw ? json(family_name(lp.raw->family)) : json(nullptr);
  return j;
}

}  // namespace

MetricReport grounding_accuracy(const std::vector<GroundingRecord>& records, const Locator& locator,
                                int parallelism) {
  const std::size_t n = records.size();
  std::vector<RecordResult> results(n);
  std::vector<double> px(n), py(n), x0(n), y0(n), x1(n), y1(n);
  std::vector<std::uint8_t> image_ok(n, 1);

  parallel_for(n, parallelism, [&](std::size_t i) {
    const GroundingRecord& rec = records[i];
    RecordResult& out = results[i];
    out.id = rec.id;
    out.slices = {{"platform", std::string(platform_name(rec.platform))},
                  {"category", std::string(category_name(rec.category))}};
    x0[i] = rec.bbox.x0;
    y0[i] = rec.bbox.y0;
    x1[i] = rec.bbox.x1;
    y1[i] = rec.bbox.y1;

    sim::Observation obs;
    try {
      obs = load_observation(rec.image);
    } catch (const std::exception& e) {
      image_ok[i] = 0;
      px[i] = py[i] = std::numeric_limits<double>::quiet_NaN();
      out.detail["error"] = std::string("image: ") + e.what();
      std::cerr << "warning: " << rec.id << ": " << e.what() << "\n";
      return;
    }
    std::string reply;
    try {
      reply = locator.locate({rec.description, obs});
    } catch (const std::exception& e) {
      out.detail["error"] = std::string("locator: ") + e.what();
    }
    const LocatedPoint lp = point_with_fallback(reply, obs.dims);
    px[i] = lp.point.x;
    py[i] = lp.point.y;
    out.detail["raw"] = reply;
    out.detail["point"] = located_json(lp);
  });

  std::vector<std::uint8_t> hits(n);
  kernels::points_in_boxes(px, py, {x0, y0, x1, y1}, hits);
  for (std::size_t i = 0; i < n; ++i) results[i].element_hit = image_ok[i] != 0 && hits[i] != 0;

  return aggregate_report(std::move(results), {"platform", "category", "platform+category"});
}

std::vector<HistoryEntry> gold_history(const std::vector<const OfflineStepRecord*>& prior) {
  std::vector<HistoryEntry> history;
  for (const OfflineStepRecord* r : prior) {
    StructuredStep s{r->gt_description, std::string(op_name(r->gt_operation)), r->gt_value, ""};
    std::optional<NormalizedPoint> loc;
    if (r->gt_operation != OpKind::Stop) loc = r->acceptable_bboxes.front().center();
    std::optional<std::string> value = r->gt_value;
    if (value_arity(r->gt_operation) == ValueArity::None) value.reset();
    history.push_back({s, validate_triplet(op_name(r->gt_operation), value, loc)});
  }
  return history;
}

namespace {

/// Records grouped by trajectory and ordered by step index.
std::map<std::string, std::vector<const OfflineStepRecord*>> by_trajectory(
    const std::vector<OfflineStepRecord>& records) {
  std::map<std::string, std::vector<const OfflineStepRecord*>> groups;
  for (const auto& r : records) groups[r.trajectory_id].push_back(&r);
  for (auto& [id, steps] : groups) {
    std::stable_sort(steps.begin(), steps.end(),
                     [](const OfflineStepRecord* a, const OfflineStepRecord* b) {
                       return a->step_index < b->step_index;
                     });
  }
  return groups;
}

}  // namespace

ScriptedInterpreter::Scripts gold_scripts(const std::vector<OfflineStepRecord>& records) {
  ScriptedInterpreter::Scripts scripts;
  for (const auto& [id, steps] : by_trajectory(records)) {
    auto& script = scripts[id];
    for (const OfflineStepRecord* r : steps) {
      script.push_back({r->gt_description, std::string(op_name(r->gt_operation)), r->gt_value, ""});
    }
  }
  return scripts;
}

MetricReport replay_offline(const std::vector<OfflineStepRecord>& records,
                            const Interpreter& interpreter, const Locator& locator,
                            int parallelism) {
  const auto groups = by_trajectory(records);
  std::map<const OfflineStepRecord*, std::vector<const OfflineStepRecord*>> prior;
  for (const auto& [id, steps] : groups) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
      prior[steps[k]] = std::vector<const OfflineStepRecord*>(steps.begin(), steps.begin() + k);
    }
  }

  std::vector<RecordResult> results(records.size());
  parallel_for(records.size(), parallelism, [&](std::size_t i) {
    const OfflineStepRecord& rec = records[i];
    RecordResult& out = results[i];
    out.id = rec.id;
    if (!rec.split.empty()) out.slices["split"] = rec.split;

    std::optional<NormalizedPoint> point;
    std::string op;
    std::optional<std::string> value;
    try {
      const sim::Observation obs = load_observation(rec.image);
      const TaskSpec task{rec.trajectory_id, rec.task};
      const StepOutput s = step(obs, task, gold_history(prior.at(&rec)), interpreter, locator);
      op = op_name(s.action.operation());
      value = s.action.value();
      point = s.action.location();
      out.detail["interpreter_raw"] = s.interpreter_raw;
      out.detail["locator_raw"] = s.locator_raw;
      out.detail["point"] = s.located ? located_json(*s.located) : json(nullptr);
    } catch (const std::exception& e) {
      out.detail["error"] = e.what();
    }
    out.detail["pred_operation"] = op;
    out.detail["pred_value"] = value ? json(*value) : json(nullptr);
    out.element_hit = element_accuracy(point, rec);
    out.op_f1 = op_f1(op, value, op_name(rec.gt_operation), rec.gt_value);
    out.step_success = step_success(point, op, value, rec);
  });
  return aggregate_report(std::move(results), {"split"});
}

MetricReport score_omni(const std::vector<OmniRecord>& records) {
  std::vector<RecordResult> results;
  results.reserve(records.size());
  for (const OmniRecord& rec : records) {
    RecordResult out;
    out.id = rec.id;
    if (!rec.split.empty()) out.slices["split"] = rec.split;
    out.omni = score_omni_record(rec);
    results.push_back(std::move(out));
  }
  return aggregate_report(std::move(results), {"split"});
}

}  // namespace guiagent
