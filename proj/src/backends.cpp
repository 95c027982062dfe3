#include "guiagent/backends.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "text_util.hpp"

namespace guiagent {

using nlohmann::json;

std::string history_to_text(const std::vector<HistoryEntry>& history) {
  if (history.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const HistoryEntry& h = history[i];
    if (i > 0) out += '\n';
    out += std::to_string(i + 1) + ". " + std::string(op_name(h.action.operation()));
    if (h.action.value()) out += " \"" + *h.action.value() + "\"";
    out += " on \"" + h.step.description + "\"";
  }
  return out;
}

std::string build_locator_prompt(std::string_view description) {
  if (description.empty()) {
    throw BackendError(BackendError::Kind::EmptyDescription, "locator description is empty");
  }
  return "In this UI screenshot, what is the position of the element corresponding to the "
         "description \"" +
         std::string(description) + "\" (with point)?";
}

std::string build_interpreter_prompt(const InterpreterRequest& req) {
  std::string ops;
  for (OpKind op : kAllOps) {
    if (!ops.empty()) ops += ", ";
    ops += op_name(op);
  }
  std::string prompt;
  prompt += "You are operating a graphical user interface using only the attached screenshot.\n\n";
  prompt += "Task: " + req.task + "\n\n";
  prompt += "History:";
  prompt += req.history.empty() ? " (none)" : "\n" + history_to_text(req.history);
  prompt += "\n\n";
  prompt += "Allowed operations: " + ops + "\n\n";
  prompt +=
      "Decide the single next step. Explain your reasoning briefly, then end with these labeled "
      "fields, one per line:\n"
      "Action: <one of the allowed operations>\n"
      "Value: <text to type, option to select, scroll amount or key combination; None for CLICK "
      "and STOP>\n"
      "Element Description: <short visual description of the target element; omit for STOP>\n"
      "Reply with \"Action: STOP\" once the task is complete.\n";
  return prompt;
}

std::string format_point(NormalizedPoint p) {
  return "(" + text::format_fixed(p.x) + ", " + text::format_fixed(p.y) + ")";
}

// ---------------------------------------------------------------------------

namespace {

const sim::ScreenModel& require_screen(const LocatorRequest& req) {
  if (!req.observation.screen_model) {
    throw BackendError(BackendError::Kind::MissingScreenModel,
                       "observation carries no screen model");
  }
  return *req.observation.screen_model;
}

constexpr double kAreaTolerance = 1e-12;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

NormalizedPoint oracle_locate(const LocatorRequest& req, const sim::ScreenModel& screen) {
  const std::string query = text::to_lower(text::trim(req.description));
  if (query.empty()) {
    throw BackendError(BackendError::Kind::EmptyDescription, "locator description is empty");
  }
  const sim::Element* best = nullptr;
  std::tuple<int, double, double, double> best_key;
  // Areas closer than kAreaTolerance tie; bbox arithmetic leaves ulp noise.
  auto ranks_before = [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    if (std::abs(std::get<1>(a) - std::get<1>(b)) > kAreaTolerance) return std::get<1>(a) < std::get<1>(b);
    return std::make_pair(std::get<2>(a), std::get<3>(a)) < std::make_pair(std::get<2>(b), std::get<3>(b));
  };
  for (const auto& e : screen.elements) {
    const std::string desc = text::to_lower(e.description);
    const std::string txt = e.text ? text::to_lower(*e.text) : std::string();
    int rank = -1;
    if (desc == query || (e.text && txt == query)) {
      rank = 0;
    } else if (desc.find(query) != std::string::npos ||
               (e.text && txt.find(query) != std::string::npos)) {
      rank = 1;
    }
    if (rank < 0) continue;
    const auto key = std::make_tuple(rank, e.bbox.area(), e.bbox.y0, e.bbox.x0);
    if (!best || ranks_before(key, best_key)) {
      best = &e;
      best_key = key;
    }
  }
  if (!best) {
    throw BackendError(BackendError::Kind::NoMatch,
                       "no element matches \"" + req.description + "\" on screen '" + screen.id +
                           "'");
  }
  return best->bbox.center();
}

NormalizedPoint naive_locate(const LocatorRequest&) { return NormalizedPoint(0.5, 0.5); }

NormalizedPoint noisy_locate(const LocatorRequest& req, const sim::ScreenModel& screen,
                             double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw BackendError(BackendError::Kind::Config, "sigma must be >= 0");
  const NormalizedPoint center = oracle_locate(req, screen);
  const std::uint64_t d = fnv1a(req.description);
  const std::uint64_t s = fnv1a(screen.id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32),
                    static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dx = normal(rng);
  const double dy = normal(rng);
  return NormalizedPoint::clamped(center.x + sigma * dx, center.y + sigma * dy);
}

StructuredStep scripted_interpret(const InterpreterRequest& req,
                                  std::span<const StructuredStep> script) {
  if (req.history.size() >= script.size()) {
    throw BackendError(BackendError::Kind::ScriptExhausted,
                       "script for task '" + req.task_id + "' has " +
                           std::to_string(script.size()) + " steps; history has " +
                           std::to_string(req.history.size()));
  }
  return script[req.history.size()];
}

StructuredStep always_click_interpret(const InterpreterRequest& req, const Interpreter& inner) {
  StructuredStep step = parse_structured_step(inner.interpret(req));
  step.operation_name = "CLICK";
  step.value.reset();
  return step;
}

// ---------------------------------------------------------------------------

std::string OracleLocator::locate(const LocatorRequest& req) const {
  return format_point(oracle_locate(req, require_screen(req)));
}

std::string NaiveLocator::locate(const LocatorRequest& req) const {
  return format_point(naive_locate(req));
}

NoisyLocator::NoisyLocator(double sigma, std::uint64_t seed) : sigma_(sigma), seed_(seed) {
  if (!(sigma >= 0.0)) throw BackendError(BackendError::Kind::Config, "sigma must be >= 0");
}

std::string NoisyLocator::locate(const LocatorRequest& req) const {
  return format_point(noisy_locate(req, require_screen(req), sigma_, seed_));
}

std::string NoisyLocator::name() const {
  return "noisy:" + text::format_fixed(sigma_) + "," + std::to_string(seed_);
}

ScriptedInterpreter::ScriptedInterpreter(Scripts scripts) : scripts_(std::move(scripts)) {}

std::string ScriptedInterpreter::interpret(const InterpreterRequest& req) const {
  auto it = scripts_.find(req.task_id);
  if (it == scripts_.end()) it = scripts_.find("");
  if (it == scripts_.end()) {
    throw BackendError(BackendError::Kind::ScriptExhausted,
                       "no script for task '" + req.task_id + "'");
  }
  return render_structured_step(scripted_interpret(req, it->second));
}

AlwaysClickInterpreter::AlwaysClickInterpreter(std::shared_ptr<const Interpreter> inner)
    : inner_(std::move(inner)) {}

std::string AlwaysClickInterpreter::interpret(const InterpreterRequest& req) const {
  return render_structured_step(always_click_interpret(req, *inner_));
}

// ---------------------------------------------------------------------------

StructuredStep step_from_json(const json& j) {
  if (!j.is_object()) throw BackendError(BackendError::Kind::Config, "script step must be an object");
  StructuredStep s;
  s.operation_name = j.at("operation").get<std::string>();
  s.description = j.value("description", std::string());
  if (auto it = j.find("value"); it != j.end() && !it->is_null()) s.value = it->get<std::string>();
  s.rationale = j.value("rationale", std::string());
  return s;
}

json step_to_json(const StructuredStep& s) {
  json j = {{"description", s.description}, {"operation", s.operation_name}, {"rationale", s.rationale}};
  j["value"] = s.value ? json(*s.value) : json(nullptr);
  return j;
}

ScriptedInterpreter::Scripts load_scripts(const json& j) {
  ScriptedInterpreter::Scripts scripts;
  auto load_list = [](const json& list) {
    if (!list.is_array()) throw BackendError(BackendError::Kind::Config, "script must be an array");
    std::vector<StructuredStep> steps;
    for (const auto& s : list) steps.push_back(step_from_json(s));
    return steps;
  };
  try {
    if (j.is_array()) {
      scripts[""] = load_list(j);
    } else if (j.is_object()) {
      for (const auto& [task, list] : j.items()) scripts[task] = load_list(list);
    } else {
      throw BackendError(BackendError::Kind::Config, "script file must be an array or object");
    }
  } catch (const json::exception& e) {
    throw BackendError(BackendError::Kind::Config, std::string("bad script: ") + e.what());
  }
  return scripts;
}

}  // namespace guiagent
