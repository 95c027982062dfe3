#pragma once

// Deterministic simulated GUI: screens are element lists, actions resolve
// through an explicit transition table, observations are rasterized PNGs.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "guiagent/action.hpp"
#include "guiagent/geometry.hpp"
#include "guiagent/raster.hpp"
#include "json.hpp"

namespace guiagent::sim {

struct Element {
  std::string id;
  Box bbox;
  std::string description;
  std::optional<std::string> text;
  Rgb fill_color;
};

struct ScreenModel {
  std::string id;
  std::vector<Element> elements;  // later entries draw over earlier ones
  Rgb background{255, 255, 255};
};

/// Empty `element` means the transition is screen-wide (matches any hit and
/// is the only kind a HOTKEY can trigger). Empty `value_pattern` is a
/// wildcard; otherwise the action value must match exactly.
struct Transition {
  std::string from_screen;
  std::optional<std::string> element;
  OpKind operation = OpKind::Click;
  std::optional<std::string> value_pattern;
  std::string to_screen;
  std::optional<std::pair<std::string, std::string>> state_effect;
};

/// Conjunction of a target screen and required state entries.
struct GoalPredicate {
  std::optional<std::string> screen;
  std::map<std::string, std::string> state;
};

struct EnvSpec {
  std::vector<ScreenModel> screens;
  std::vector<Transition> transitions;
  std::string initial_screen;
  GoalPredicate goal;
  ScreenDims render_dims{640, 480};
  std::string platform = "WEB";

  const ScreenModel* find_screen(std::string_view id) const;
};

/// Raised by the loaders; `pointer` is a JSON pointer to the offending field.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

EnvSpec parse_env_spec(const nlohmann::json& j, const std::string& pointer = "");
ScreenModel parse_screen(const nlohmann::json& j, const std::string& pointer = "");
nlohmann::json env_spec_to_json(const EnvSpec& spec);
nlohmann::json screen_to_json(const ScreenModel& screen);

struct Observation {
  std::vector<std::uint8_t> png;
  ScreenDims dims;
  /// Present for local backends only; remote backends see pixels alone.
  std::shared_ptr<const ScreenModel> screen_model;

  Observation pixels_only() const { return {png, dims, nullptr}; }
};

/// Rasterizes one screen: background, then each element as a filled
/// rectangle with a darker 1-pixel border and its text (or id) in the
/// built-in 5x7 font, centered.
Image render_screen(const ScreenModel& screen, ScreenDims dims);
/// Pixel area covered by an element's label, if it has room for one.
std::optional<PixelRect> label_box(const Element& e, ScreenDims dims);
Rgb border_color(Rgb fill);

struct ApplyOutcome {
  enum class Kind { Transitioned, NoOp, Stopped };
  Kind kind = Kind::NoOp;
  std::string screen;                 // screen after the action
  std::optional<std::string> element;  // hit element, if any
};

std::string_view outcome_name(ApplyOutcome::Kind k);

/// Single-owner mutable environment over a shared immutable spec.
class Environment {
 public:
  explicit Environment(std::shared_ptr<const EnvSpec> spec);

  const EnvSpec& spec() const noexcept { return *spec_; }
  const std::string& current_screen() const noexcept { return screen_; }
  const std::map<std::string, std::string>& state() const noexcept { return state_; }
  bool stopped() const noexcept { return stopped_; }

  Observation observe() const;
  ApplyOutcome apply_action(const ActionTriplet& a);
  /// Parses one command line, maps pixels back through unscale_point and
  /// applies it. Throws CommandSyntaxError on malformed input.
  ApplyOutcome apply_command(std::string_view command);
  bool is_goal() const;

  /// Topmost element on the current screen containing p.
  std::optional<std::string> hit_test(NormalizedPoint p) const;

 private:
  ApplyOutcome apply(OpKind op, std::optional<NormalizedPoint> where,
                     const std::optional<std::string>& value);

  std::shared_ptr<const EnvSpec> spec_;
  std::string screen_;
  std::map<std::string, std::string> state_;
  bool stopped_ = false;
};

Environment load_env(const std::filesystem::path& spec_file);

/// Evaluates the predicate against an explicit (screen, state) pair.
bool goal_holds(const GoalPredicate& goal, const std::string& screen,
                const std::map<std::string, std::string>& state);

}  // namespace guiagent::sim
