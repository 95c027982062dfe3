#pragma once

// Two-stage agent loop: interpret, locate, assemble the triplet, execute.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "guiagent/backends.hpp"
#include "guiagent/sim_env.hpp"

namespace guiagent {

struct TaskSpec {
  std::string task_id;
  std::string goal;
  int max_steps = 15;
  /// End the run as soon as the environment's goal predicate holds.
  bool stop_on_goal = true;
};

/// A failure inside one agent step, tagged with the stage that raised it.
class AgentError : public std::runtime_error {
 public:
  enum class Stage { Interpreter, InterpreterParse, Validation, Locator, Environment };
  AgentError(Stage stage, const std::string& what)
      : std::runtime_error(std::string(stage_name(stage)) + ": " + what), stage_(stage) {}
  Stage stage() const noexcept { return stage_; }
  static std::string_view stage_name(Stage s);

 private:
  Stage stage_;
};

struct StepOutput {
  StructuredStep structured;
  ActionTriplet action = ActionTriplet::stop();
  std::string interpreter_raw;
  std::string locator_raw;  // empty when the locator was not called
  std::optional<LocatedPoint> located;
};

/// One interpreter call; one locator call unless the step is STOP. Values
/// supplied for CLICK or STOP are dropped before validation.
StepOutput step(const sim::Observation& observation, const TaskSpec& task,
                const std::vector<HistoryEntry>& history, const Interpreter& interpreter,
                const Locator& locator);

struct TrajectoryStep {
  int index = 0;
  std::string observation_digest;  // sha256 of the PNG the step consumed
  std::string screen;              // environment screen before the action
  StructuredStep structured;
  ActionTriplet action = ActionTriplet::stop();
  std::string command;
  std::string outcome;
  std::string interpreter_raw;
  std::string locator_raw;
};

enum class Terminal { Stopped, BudgetExhausted, EnvGoalReached, Error };
std::string_view terminal_name(Terminal t);

struct RunResult {
  std::string task_id;
  std::vector<TrajectoryStep> steps;
  Terminal terminal = Terminal::Error;
  std::optional<std::string> error_detail;
  bool goal_reached = false;  // goal predicate at the end of the run
  /// Observation PNGs in step order, kept when requested.
  std::vector<std::vector<std::uint8_t>> observations;
};

struct RunOptions {
  bool keep_observations = false;
};

RunResult run_task(sim::Environment& env, const TaskSpec& task, const Interpreter& interpreter,
                   const Locator& locator, const RunOptions& options = {});

nlohmann::json run_result_to_json(const RunResult& r);
nlohmann::json triplet_to_json(const ActionTriplet& a);

}  // namespace guiagent
