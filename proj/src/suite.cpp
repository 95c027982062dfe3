#include "guiagent/suite.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "guiagent/util.hpp"

namespace guiagent {

using nlohmann::json;
namespace fs = std::filesystem;

TaskSuite parse_suite(const json& j, const fs::path& base) {
  TaskSuite suite;
  if (!j.is_object()) throw sim::SpecError("", "suite must be an object");
  const auto envs = j.find("envs");
  if (envs == j.end() || !envs->is_object() || envs->empty()) {
    throw sim::SpecError("/envs", "at least one environment is required");
  }
  for (const auto& [name, value] : envs->items()) {
    const std::string ptr = "/envs/" + name;
    if (value.is_string()) {
      const fs::path p = base / value.get<std::string>();
      json doc;
      try {
        doc = json::parse(read_text_file(p));
      } catch (const json::exception& e) {
        throw sim::SpecError(ptr, p.string() + ": " + e.what());
      }
      suite.envs[name] = std::make_shared<const sim::EnvSpec>(sim::parse_env_spec(doc, ""));
    } else {
      suite.envs[name] = std::make_shared<const sim::EnvSpec>(sim::parse_env_spec(value, ptr));
    }
  }

  const auto tasks = j.find("tasks");
  if (tasks == j.end() || !tasks->is_array()) throw sim::SpecError("/tasks", "must be an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < tasks->size(); ++i) {
    const json& t = (*tasks)[i];
    const std::string ptr = "/tasks/" + std::to_string(i);
    try {
      SuiteTask task;
      task.spec.task_id = t.at("task_id").get<std::string>();
      task.spec.goal = t.at("goal").get<std::string>();
      task.spec.max_steps = t.value("max_steps", task.spec.max_steps);
      task.spec.stop_on_goal = t.value("stop_on_goal", task.spec.stop_on_goal);
      task.env = t.at("env").get<std::string>();
      if (!suite.envs.count(task.env)) throw sim::SpecError(ptr + "/env", "unknown env '" + task.env + "'");
      if (!ids.insert(task.spec.task_id).second) {
        throw sim::SpecError(ptr + "/task_id", "duplicate task id '" + task.spec.task_id + "'");
      }
      task.env_spec = suite.envs.at(task.env);
      if (auto it = t.find("success"); it != t.end()) {
        json env_json = sim::env_spec_to_json(*task.env_spec);
        env_json["goal"] = *it;
        task.env_spec = std::make_shared<const sim::EnvSpec>(sim::parse_env_spec(env_json, ptr + "/success"));
      }
      if (task.spec.max_steps < 1) throw sim::SpecError(ptr + "/max_steps", "must be at least 1");
      for (const json& s : t.at("script")) {
        GoldStep g{step_from_json(s), std::nullopt};
        if (auto it = s.find("element"); it != s.end() && !it->is_null()) g.element = it->get<std::string>();
        task.gold.push_back(std::move(g));
      }
      suite.tasks.push_back(std::move(task));
    } catch (const json::exception& e) {
      throw sim::SpecError(ptr, e.what());
    } catch (const BackendError& e) {
      throw sim::SpecError(ptr + "/script", e.what());
    }
  }
  return suite;
}

TaskSuite load_suite(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw sim::SpecError("", path.string() + ": " + e.what());
  }
  return parse_suite(doc, path.parent_path());
}

json suite_to_json(const TaskSuite& suite) {
  json envs = json::object();
  for (const auto& [name, spec] : suite.envs) envs[name] = sim::env_spec_to_json(*spec);
  json tasks = json::array();
  for (const SuiteTask& t : suite.tasks) {
    json script = json::array();
    for (const GoldStep& g : t.gold) {
      json s = step_to_json(g.step);
      s["element"] = g.element ? json(*g.element) : json(nullptr);
      script.push_back(s);
    }
    json goal = json::object();
    if (t.env_spec->goal.screen) goal["screen"] = *t.env_spec->goal.screen;
    if (!t.env_spec->goal.state.empty()) goal["state"] = t.env_spec->goal.state;
    tasks.push_back({{"task_id", t.spec.task_id},
                     {"success", goal},
                     {"goal", t.spec.goal},
                     {"max_steps", t.spec.max_steps},
                     {"stop_on_goal", t.spec.stop_on_goal},
                     {"env", t.env},
                     {"script", script}});
  }
  return {{"envs", envs}, {"tasks", tasks}};
}

ScriptedInterpreter::Scripts suite_scripts(const TaskSuite& suite) {
  ScriptedInterpreter::Scripts scripts;
  for (const SuiteTask& t : suite.tasks) {
    auto& script = scripts[t.spec.task_id];
    for (const GoldStep& g : t.gold) script.push_back(g.step);
  }
  return scripts;
}

GoldWalk walk_gold(const SuiteTask& task) {
  sim::Environment env(task.env_spec);
  GoldWalk walk;
  for (std::size_t k = 0; k < task.gold.size(); ++k) {
    const GoldStep& g = task.gold[k];
    const std::string ptr = "/tasks/" + task.spec.task_id + "/script/" + std::to_string(k);
    GoldFrame frame;
    frame.screen = env.current_screen();
    frame.observation = env.observe();
    const auto op = parse_op(g.step.operation_name);
    if (!op) throw sim::SpecError(ptr, "unknown operation '" + g.step.operation_name + "'");

    char id[16];
    std::snprintf(id, sizeof id, "%03zu", k);
    frame.record.id = task.spec.task_id + "/" + id;
    frame.record.trajectory_id = task.spec.task_id;
    frame.record.step_index = static_cast<int>(k);
    frame.record.task = task.spec.goal;
    frame.record.gt_description = g.step.description;
    frame.record.gt_operation = *op;
    frame.record.split = task.env;
    if (value_arity(*op) != ValueArity::None) frame.record.gt_value = g.step.value;

    if (*op == OpKind::Stop) {
      frame.action = ActionTriplet::stop();
    } else {
      const sim::ScreenModel& screen = *frame.observation.screen_model;
      Box box;
      if (g.element) {
        const auto it = std::find_if(screen.elements.begin(), screen.elements.end(),
                                     [&](const sim::Element& e) { return e.id == *g.element; });
        if (it == screen.elements.end()) {
          throw sim::SpecError(ptr + "/element", "no element '" + *g.element + "' on screen '" +
                                                      screen.id + "'");
        }
        box = it->bbox;
      } else {
        const NormalizedPoint c = oracle_locate({g.step.description, frame.observation}, screen);
        box = Box{c.x, c.y, c.x, c.y};
        for (const sim::Element& e : screen.elements) {
          if (e.bbox.center() == c) box = e.bbox;
        }
      }
      frame.record.acceptable_bboxes = {box};
      try {
        frame.action = validate_triplet(g.step.operation_name, frame.record.gt_value, box.center());
      } catch (const ActionError& e) {
        throw sim::SpecError(ptr, e.what());
      }
    }
    env.apply_command(serialize_action(frame.action, frame.observation.dims));
    walk.frames.push_back(std::move(frame));
    if (*op == OpKind::Stop) break;
    if (task.spec.stop_on_goal && env.is_goal()) break;
  }
  walk.goal_reached = env.is_goal();
  return walk;
}

std::size_t RunScore::succeeded() const {
  return static_cast<std::size_t>(std::count(step_success.begin(), step_success.end(), true));
}

RunScore score_run(const RunResult& run, const GoldWalk& gold) {
  RunScore score;
  for (std::size_t k = 0; k < gold.frames.size(); ++k) {
    const GoldFrame& g = gold.frames[k];
    if (g.record.gt_operation == OpKind::Stop) continue;
    bool ok = false;
    if (k < run.steps.size() && run.steps[k].screen == g.screen) {
      const ActionTriplet& a = run.steps[k].action;
      ok = step_success(a.location(), op_name(a.operation()), a.value(), g.record);
    }
    score.step_success.push_back(ok);
  }
  return score;
}

SuiteRun run_suite(const TaskSuite& suite, const Interpreter& interpreter, const Locator& locator,
                   int parallelism, const RunOptions& options) {
  SuiteRun out;
  out.n = suite.tasks.size();
  out.runs.resize(out.n);
  out.scores.resize(out.n);
  parallel_for(out.n, parallelism, [&](std::size_t i) {
    const SuiteTask& task = suite.tasks[i];
    sim::Environment env(task.env_spec);
    out.runs[i] = run_task(env, task.spec, interpreter, locator, options);
    out.scores[i] = score_run(out.runs[i], walk_gold(task));
  });
  std::size_t reached = 0, steps = 0, ok = 0;
  for (std::size_t i = 0; i < out.n; ++i) {
    reached += out.runs[i].goal_reached ? 1 : 0;
    steps += out.scores[i].step_success.size();
    ok += out.scores[i].succeeded();
  }
  if (out.n) out.success_rate = static_cast<double>(reached) / static_cast<double>(out.n);
  if (steps) out.step_sr = static_cast<double>(ok) / static_cast<double>(steps);
  return out;
}

json suite_summary_json(const SuiteRun& run) {
  std::map<std::string, int> terminals;
  std::size_t steps = 0, ok = 0;
  for (std::size_t i = 0; i < run.n; ++i) {
    ++terminals[std::string(terminal_name(run.runs[i].terminal))];
    steps += run.scores[i].step_success.size();
    ok += run.scores[i].succeeded();
  }
  return {{"n", run.n},
          {"success_rate", run.success_rate},
          {"step_sr", run.step_sr},
          {"gold_steps", steps},
          {"steps_succeeded", ok},
          {"terminals", terminals}};
}

json suite_record_json(const RunResult& run, const RunScore& score) {
  json j = {{"id", run.task_id},
            {"terminal", terminal_name(run.terminal)},
            {"goal_reached", run.goal_reached},
            {"steps_taken", run.steps.size()},
            {"step_success", score.step_success}};
  j["error_detail"] = run.error_detail ? json(*run.error_detail) : json(nullptr);
  return j;
}

}  // namespace guiagent
