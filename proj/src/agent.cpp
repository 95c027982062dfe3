#include "guiagent/agent.hpp"

#include "guiagent/util.hpp"

namespace guiagent {

using nlohmann::json;

std::string_view AgentError::stage_name(Stage s) {
  switch (s) {
    case Stage::Interpreter: return "interpreter";
    case Stage::InterpreterParse: return "interpreter-parse";
    case Stage::Validation: return "validation";
    case Stage::Locator: return "locator";
    case Stage::Environment: return "environment";
  }
  return "unknown";
}

std::string_view terminal_name(Terminal t) {
  switch (t) {
    case Terminal::Stopped: return "STOPPED";
    case Terminal::BudgetExhausted: return "BUDGET_EXHAUSTED";
    case Terminal::EnvGoalReached: return "ENV_GOAL_REACHED";
    case Terminal::Error: return "ERROR";
  }
  return "ERROR";
}

namespace {

sim::Observation view_for(const sim::Observation& obs, bool wants_model) {
  return wants_model ? obs : obs.pixels_only();
}

}  // namespace

StepOutput step(const sim::Observation& observation, const TaskSpec& task,
                const std::vector<HistoryEntry>& history, const Interpreter& interpreter,
                const Locator& locator) {
  StepOutput out;
  InterpreterRequest ireq{task.task_id, task.goal, history,
                          view_for(observation, interpreter.wants_screen_model())};
  try {
    out.interpreter_raw = interpreter.interpret(ireq);
  } catch (const std::exception& e) {
    throw AgentError(AgentError::Stage::Interpreter, e.what());
  }
  try {
    out.structured = parse_structured_step(out.interpreter_raw);
  } catch (const StepParseError& e) {
    throw AgentError(AgentError::Stage::InterpreterParse, e.what());
  }

  const auto op = parse_op(out.structured.operation_name);
  if (!op) {
    throw AgentError(AgentError::Stage::Validation,
                     "unknown operation '" + out.structured.operation_name + "'");
  }
  std::optional<std::string> value = out.structured.value;
  if (value_arity(*op) == ValueArity::None) value.reset();

  if (*op == OpKind::Stop) {
    out.action = ActionTriplet::stop();
    return out;
  }

  LocatorRequest lreq{out.structured.description,
                      view_for(observation, locator.wants_screen_model())};
  try {
    out.locator_raw = locator.locate(lreq);
  } catch (const std::exception& e) {
    throw AgentError(AgentError::Stage::Locator, e.what());
  }
  out.located = point_with_fallback(out.locator_raw, observation.dims);
  try {
    out.action = validate_triplet(op_name(*op), value, out.located->point);
  } catch (const ActionError& e) {
    throw AgentError(AgentError::Stage::Validation, e.what());
  }
  return out;
}

RunResult run_task(sim::Environment& env, const TaskSpec& task, const Interpreter& interpreter,
                   const Locator& locator, const RunOptions& options) {
  RunResult result;
  result.task_id = task.task_id;
  std::vector<HistoryEntry> history;
  result.terminal = Terminal::BudgetExhausted;

  for (int k = 1; k <= task.max_steps; ++k) {
    sim::Observation obs = env.observe();
    TrajectoryStep ts;
    ts.index = k;
    ts.observation_digest = sha256_hex(obs.png);
    ts.screen = env.current_screen();
    if (options.keep_observations) result.observations.push_back(obs.png);

    StepOutput out;
    try {
      out = step(obs, task, history, interpreter, locator);
    } catch (const AgentError& e) {
      result.terminal = Terminal::Error;
      result.error_detail = "step " + std::to_string(k) + ": " + e.what();
      if (options.keep_observations) result.observations.pop_back();
      break;
    }
    ts.structured = out.structured;
    ts.action = out.action;
    ts.interpreter_raw = std::move(out.interpreter_raw);
    ts.locator_raw = std::move(out.locator_raw);
    ts.command = serialize_action(out.action, obs.dims);
    try {
      ts.outcome = std::string(sim::outcome_name(env.apply_command(ts.command).kind));
    } catch (const std::exception& e) {
      result.terminal = Terminal::Error;
      result.error_detail = "step " + std::to_string(k) + ": " +
                            std::string(AgentError::stage_name(AgentError::Stage::Environment)) +
                            ": " + e.what();
      if (options.keep_observations) result.observations.pop_back();
      break;
    }
    result.steps.push_back(ts);

    if (out.action.operation() == OpKind::Stop) {
      result.terminal = Terminal::Stopped;
      break;
    }
    history.push_back({out.structured, out.action});
    if (task.stop_on_goal && env.is_goal()) {
      result.terminal = Terminal::EnvGoalReached;
      break;
    }
  }
  result.goal_reached = env.is_goal();
  return result;
}

json triplet_to_json(const ActionTriplet& a) {
  json j = {{"operation", op_name(a.operation())}};
  if (a.location()) {
    j["location"] = {{"x", a.location()->x}, {"y", a.location()->y}};
  } else {
    j["location"] = nullptr;
  }
  j["value"] = a.value() ? json(*a.value()) : json(nullptr);
  return j;
}

json run_result_to_json(const RunResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    json structured = {{"description", s.structured.description},
                       {"operation", s.structured.operation_name},
                       {"rationale", s.structured.rationale}};
    structured["value"] = s.structured.value ? json(*s.structured.value) : json(nullptr);
    steps.push_back({{"index", s.index},
                     {"observation_digest", s.observation_digest},
                     {"screen", s.screen},
                     {"structured", structured},
                     {"action", triplet_to_json(s.action)},
                     {"command", s.command},
                     {"outcome", s.outcome},
                     {"interpreter_raw", s.interpreter_raw},
                     {"locator_raw", s.locator_raw}});
  }
  json j = {{"task_id", r.task_id},
            {"terminal", terminal_name(r.terminal)},
            {"goal_reached", r.goal_reached},
            {"steps", steps}};
  j["error_detail"] = r.error_detail ? json(*r.error_detail) : json(nullptr);
  return j;
}

}  // namespace guiagent
