#pragma once

// Interactive task suites over the simulated environment: loading, gold
// trajectories, running an agent over every task and scoring the runs.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "guiagent/agent.hpp"
#include "guiagent/metrics.hpp"

namespace guiagent {

struct GoldStep {
  StructuredStep step;
  /// Element the step acts on; when absent the oracle resolves the
  /// description against the current screen.
  std::optional<std::string> element;
};

struct SuiteTask {
  TaskSpec spec;
  std::string env;
  /// The named env, with its goal replaced when the task has its own.
  std::shared_ptr<const sim::EnvSpec> env_spec;
  std::vector<GoldStep> gold;
};

struct TaskSuite {
  std::map<std::string, std::shared_ptr<const sim::EnvSpec>> envs;
  std::vector<SuiteTask> tasks;
};

/// {"envs": {name: EnvSpec object or path}, "tasks": [{"task_id", "goal",
/// "max_steps"?, "stop_on_goal"?, "env", "success"?: goal predicate,
/// "script": [step + "element"?]}]}.
/// Env paths are relative to `base`. Throws sim::SpecError.
TaskSuite parse_suite(const nlohmann::json& j, const std::filesystem::path& base = {});
TaskSuite load_suite(const std::filesystem::path& path);
nlohmann::json suite_to_json(const TaskSuite& suite);

/// The interpreter script that replays every task's gold steps.
ScriptedInterpreter::Scripts suite_scripts(const TaskSuite& suite);

/// One gold step as executed from the initial screen.
struct GoldFrame {
  std::string screen;
  sim::Observation observation;
  ActionTriplet action = ActionTriplet::stop();
  OfflineStepRecord record;  // acceptable bbox = the acted-on element
};

struct GoldWalk {
  std::vector<GoldFrame> frames;  // includes the final STOP if scripted
  bool goal_reached = false;
};

/// Executes the gold script at element centers. Throws sim::SpecError when a
/// step names an element missing from the current screen.
GoldWalk walk_gold(const SuiteTask& task);

struct RunScore {
  std::vector<bool> step_success;  // one per gold non-STOP step
  std::size_t succeeded() const;
};

/// Gold step k succeeds when the run executed a k-th step on the same screen
/// and that step passes step_success against the gold record.
RunScore score_run(const RunResult& run, const GoldWalk& gold);

struct SuiteRun {
  std::vector<RunResult> runs;  // task order
  std::vector<RunScore> scores;
  std::size_t n = 0;
  double success_rate = 0;  // goal reached at the end of the run
  double step_sr = 0;       // pooled over gold non-STOP steps
};

SuiteRun run_suite(const TaskSuite& suite, const Interpreter& interpreter, const Locator& locator,
                   int parallelism = 1, const RunOptions& options = {});

nlohmann::json suite_summary_json(const SuiteRun& run);
nlohmann::json suite_record_json(const RunResult& run, const RunScore& score);

}  // namespace guiagent
