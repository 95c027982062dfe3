#pragma once

// Interpreter and locator backends. Both stages exchange plain text so that
// live models, scripted fixtures and baselines all flow through the same
// parsers.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "guiagent/history.hpp"
#include "guiagent/sim_env.hpp"

namespace guiagent {

struct InterpreterRequest {
  std::string task_id;
  std::string task;
  std::vector<HistoryEntry> history;
  sim::Observation observation;
};

struct LocatorRequest {
  std::string description;
  sim::Observation observation;
};

class BackendError : public std::runtime_error {
 public:
  enum class Kind { EmptyDescription, NoMatch, ScriptExhausted, MissingScreenModel, Config };
  BackendError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Interpreter stage: task + history + screenshot -> labeled-field text.
class Interpreter {
 public:
  virtual ~Interpreter() = default;
  virtual std::string interpret(const InterpreterRequest& req) const = 0;
  /// Backends that return false only ever receive pixels.
  virtual bool wants_screen_model() const { return false; }
  virtual std::string name() const = 0;
};

/// The "press" stage: description + screenshot -> text containing a point.
class Locator {
 public:
  virtual ~Locator() = default;
  virtual std::string locate(const LocatorRequest& req) const = 0;
  virtual bool wants_screen_model() const { return false; }
  virtual std::string name() const = 0;
};

// --- prompts ---------------------------------------------------------------

std::string build_locator_prompt(std::string_view description);
std::string build_interpreter_prompt(const InterpreterRequest& req);

// --- builtin behaviours ----------------------------------------------------

/// Case-insensitive match on description or text: exact matches rank above
/// substring matches, then smallest area, then topmost, then leftmost.
/// Returns the winner's bbox center.
NormalizedPoint oracle_locate(const LocatorRequest& req, const sim::ScreenModel& screen);
NormalizedPoint naive_locate(const LocatorRequest& req);
/// Oracle center plus N(0, sigma^2) per axis, clamped. The draw depends only
/// on (seed, description, screen id), so a given step sees the same offset
/// direction at every sigma.
NormalizedPoint noisy_locate(const LocatorRequest& req, const sim::ScreenModel& screen,
                             double sigma, std::uint64_t seed);
StructuredStep scripted_interpret(const InterpreterRequest& req,
                                  std::span<const StructuredStep> script);
/// Forces CLICK and drops the value of whatever `inner` proposes.
StructuredStep always_click_interpret(const InterpreterRequest& req, const Interpreter& inner);

/// "(x, y)" with shortest round-trip decimals.
std::string format_point(NormalizedPoint p);

// --- builtin backends ------------------------------------------------------

class OracleLocator final : public Locator {
 public:
  std::string locate(const LocatorRequest& req) const override;
  bool wants_screen_model() const override { return true; }
  std::string name() const override { return "oracle"; }
};

class NaiveLocator final : public Locator {
 public:
  std::string locate(const LocatorRequest& req) const override;
  std::string name() const override { return "naive"; }
};

class NoisyLocator final : public Locator {
 public:
  NoisyLocator(double sigma, std::uint64_t seed);
  std::string locate(const LocatorRequest& req) const override;
  bool wants_screen_model() const override { return true; }
  std::string name() const override;

 private:
  double sigma_;
  std::uint64_t seed_;
};

/// Scripts keyed by task id; the step returned is script[history length].
class ScriptedInterpreter final : public Interpreter {
 public:
  using Scripts = std::map<std::string, std::vector<StructuredStep>>;
  explicit ScriptedInterpreter(Scripts scripts);
  std::string interpret(const InterpreterRequest& req) const override;
  std::string name() const override { return "scripted"; }

 private:
  Scripts scripts_;
};

class AlwaysClickInterpreter final : public Interpreter {
 public:
  explicit AlwaysClickInterpreter(std::shared_ptr<const Interpreter> inner);
  std::string interpret(const InterpreterRequest& req) const override;
  bool wants_screen_model() const override { return inner_->wants_screen_model(); }
  std::string name() const override { return "always-click:" + inner_->name(); }

 private:
  std::shared_ptr<const Interpreter> inner_;
};

/// Parses a JSON script file: either a list of steps (single task, keyed "")
/// or an object mapping task id -> list of steps. Each step is
/// {"description", "operation", "value"?, "rationale"?}.
ScriptedInterpreter::Scripts load_scripts(const nlohmann::json& j);
StructuredStep step_from_json(const nlohmann::json& j);
nlohmann::json step_to_json(const StructuredStep& s);

}  // namespace guiagent
