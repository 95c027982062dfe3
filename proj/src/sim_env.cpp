#include "guiagent/sim_env.hpp"

#include <set>
#include <tuple>

#include "guiagent/util.hpp"

namespace guiagent::sim {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& pointer, const char* key) {
  if (!obj.is_object()) throw SpecError(pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SpecError(pointer + "/" + key, "missing required field");
  return *it;
}

std::string require_string(const json& obj, const std::string& pointer, const char* key) {
  const json& v = require(obj, pointer, key);
  if (!v.is_string()) throw SpecError(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const std::string& pointer,
                                           const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SpecError(pointer + "/" + key, "expected a string or null");
  return it->get<std::string>();
}

Rgb parse_rgb(const json& v, const std::string& pointer) {
  if (!v.is_array() || v.size() != 3) throw SpecError(pointer, "expected [r, g, b]");
  std::uint8_t c[3];
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer() || v[i].get<long long>() < 0 || v[i].get<long long>() > 255) {
      throw SpecError(pointer + "/" + std::to_string(i), "color channel must be an integer 0..255");
    }
    c[i] = static_cast<std::uint8_t>(v[i].get<int>());
  }
  return {c[0], c[1], c[2]};
}

Box parse_box(const json& v, const std::string& pointer) {
  if (!v.is_array() || v.size() != 4) throw SpecError(pointer, "expected [x0, y0, x1, y1]");
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw SpecError(pointer + "/" + std::to_string(i), "expected a number");
    c[i] = v[i].get<double>();
  }
  Box b{c[0], c[1], c[2], c[3]};
  if (!b.well_formed()) throw SpecError(pointer, "bbox must satisfy 0<=x0<x1<=1 and 0<=y0<y1<=1");
  return b;
}

json rgb_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

}  // namespace

const ScreenModel* EnvSpec::find_screen(std::string_view id) const {
  for (const auto& s : screens) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

ScreenModel parse_screen(const json& j, const std::string& pointer) {
  ScreenModel screen;
  screen.id = require_string(j, pointer, "id");
  if (auto it = j.find("background"); it != j.end()) {
    screen.background = parse_rgb(*it, pointer + "/background");
  }
  const json& elements = require(j, pointer, "elements");
  if (!elements.is_array()) throw SpecError(pointer + "/elements", "expected an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string ep = pointer + "/elements/" + std::to_string(i);
    const json& ej = elements[i];
    Element e;
    e.id = require_string(ej, ep, "id");
    if (e.id.empty()) throw SpecError(ep + "/id", "element id must be non-empty");
    if (!ids.insert(e.id).second) throw SpecError(ep + "/id", "duplicate element id '" + e.id + "'");
    e.bbox = parse_box(require(ej, ep, "bbox"), ep + "/bbox");
    e.description = require_string(ej, ep, "description");
    e.text = optional_string(ej, ep, "text");
    e.fill_color = parse_rgb(require(ej, ep, "fill_color"), ep + "/fill_color");
    screen.elements.push_back(std::move(e));
  }
  return screen;
}

EnvSpec parse_env_spec(const json& j, const std::string& pointer) {
  EnvSpec spec;
  {
    const json& dims = require(j, pointer, "render_dims");
    const std::string dp = pointer + "/render_dims";
    const json& w = require(dims, dp, "width");
    const json& h = require(dims, dp, "height");
    if (!w.is_number_integer() || w.get<long long>() < 1 || w.get<long long>() > 16384) {
      throw SpecError(dp + "/width", "expected an integer in [1, 16384]");
    }
    if (!h.is_number_integer() || h.get<long long>() < 1 || h.get<long long>() > 16384) {
      throw SpecError(dp + "/height", "expected an integer in [1, 16384]");
    }
    spec.render_dims = ScreenDims(w.get<int>(), h.get<int>());
  }
  if (auto p = optional_string(j, pointer, "platform")) spec.platform = *p;

  const json& screens = require(j, pointer, "screens");
  if (!screens.is_array() || screens.empty()) {
    throw SpecError(pointer + "/screens", "expected a non-empty array");
  }
  std::set<std::string> screen_ids;
  for (std::size_t i = 0; i < screens.size(); ++i) {
    const std::string sp = pointer + "/screens/" + std::to_string(i);
    ScreenModel s = parse_screen(screens[i], sp);
    if (!screen_ids.insert(s.id).second) {
      throw SpecError(sp + "/id", "duplicate screen id '" + s.id + "'");
    }
    spec.screens.push_back(std::move(s));
  }

  spec.initial_screen = require_string(j, pointer, "initial_screen");
  if (!spec.find_screen(spec.initial_screen)) {
    throw SpecError(pointer + "/initial_screen", "unknown screen '" + spec.initial_screen + "'");
  }

  if (auto it = j.find("transitions"); it != j.end()) {
    if (!it->is_array()) throw SpecError(pointer + "/transitions", "expected an array");
    std::set<std::tuple<std::string, std::string, int, std::string, bool>> keys;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string tp = pointer + "/transitions/" + std::to_string(i);
      const json& tj = (*it)[i];
      Transition t;
      t.from_screen = require_string(tj, tp, "from_screen");
      const ScreenModel* from = spec.find_screen(t.from_screen);
      if (!from) throw SpecError(tp + "/from_screen", "unknown screen '" + t.from_screen + "'");
      t.element = optional_string(tj, tp, "element");
      if (t.element) {
        bool found = false;
        for (const auto& e : from->elements) found = found || e.id == *t.element;
        if (!found) {
          throw SpecError(tp + "/element",
                          "no element '" + *t.element + "' on screen '" + t.from_screen + "'");
        }
      }
      const std::string op = require_string(tj, tp, "operation");
      const auto kind = parse_op(op);
      if (!kind) throw SpecError(tp + "/operation", "unknown operation '" + op + "'");
      t.operation = *kind;
      t.value_pattern = optional_string(tj, tp, "value_pattern");
      if (t.value_pattern == "*") t.value_pattern.reset();
      t.to_screen = require_string(tj, tp, "to_screen");
      if (!spec.find_screen(t.to_screen)) {
        throw SpecError(tp + "/to_screen", "unknown screen '" + t.to_screen + "'");
      }
      if (auto effect = optional_string(tj, tp, "state_effect")) {
        const auto eq = effect->find('=');
        if (eq == std::string::npos || eq == 0) {
          throw SpecError(tp + "/state_effect", "expected 'key=value'");
        }
        t.state_effect = std::make_pair(effect->substr(0, eq), effect->substr(eq + 1));
      }
      auto key = std::make_tuple(t.from_screen, t.element.value_or(""), static_cast<int>(t.operation),
                                 t.value_pattern.value_or(""), t.value_pattern.has_value());
      if (!keys.insert(key).second) {
        throw SpecError(tp, "duplicate (from_screen, element, operation, value_pattern)");
      }
      spec.transitions.push_back(std::move(t));
    }
  }

  const json& goal = require(j, pointer, "goal");
  const std::string gp = pointer + "/goal";
  if (!goal.is_object()) throw SpecError(gp, "expected an object");
  spec.goal.screen = optional_string(goal, gp, "screen");
  if (spec.goal.screen && !spec.find_screen(*spec.goal.screen)) {
    throw SpecError(gp + "/screen", "unknown screen '" + *spec.goal.screen + "'");
  }
  if (auto it = goal.find("state"); it != goal.end()) {
    if (!it->is_object()) throw SpecError(gp + "/state", "expected an object of strings");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw SpecError(gp + "/state/" + k, "expected a string");
      spec.goal.state[k] = v.get<std::string>();
    }
  }
  if (!spec.goal.screen && spec.goal.state.empty()) {
    throw SpecError(gp, "goal needs a screen or state condition");
  }
  return spec;
}

json screen_to_json(const ScreenModel& screen) {
  json elements = json::array();
  for (const auto& e : screen.elements) {
    json ej = {{"id", e.id},
               {"bbox", json::array({e.bbox.x0, e.bbox.y0, e.bbox.x1, e.bbox.y1})},
               {"description", e.description},
               {"fill_color", rgb_json(e.fill_color)}};
    ej["text"] = e.text ? json(*e.text) : json(nullptr);
    elements.push_back(std::move(ej));
  }
  return {{"id", screen.id}, {"background", rgb_json(screen.background)}, {"elements", elements}};
}

json env_spec_to_json(const EnvSpec& spec) {
  json screens = json::array();
  for (const auto& s : spec.screens) screens.push_back(screen_to_json(s));
  json transitions = json::array();
  for (const auto& t : spec.transitions) {
    json tj = {{"from_screen", t.from_screen},
               {"operation", op_name(t.operation)},
               {"to_screen", t.to_screen}};
    tj["element"] = t.element ? json(*t.element) : json(nullptr);
    tj["value_pattern"] = t.value_pattern ? json(*t.value_pattern) : json("*");
    tj["state_effect"] =
        t.state_effect ? json(t.state_effect->first + "=" + t.state_effect->second) : json(nullptr);
    transitions.push_back(std::move(tj));
  }
  json goal = json::object();
  if (spec.goal.screen) goal["screen"] = *spec.goal.screen;
  if (!spec.goal.state.empty()) goal["state"] = spec.goal.state;
  return {{"render_dims", {{"width", spec.render_dims.width}, {"height", spec.render_dims.height}}},
          {"platform", spec.platform},
          {"initial_screen", spec.initial_screen},
          {"screens", screens},
          {"transitions", transitions},
          {"goal", goal}};
}

// ---------------------------------------------------------------------------
// Rendering

Rgb border_color(Rgb fill) {
  auto d = [](std::uint8_t c) { return static_cast<std::uint8_t>(c * 3 / 5); };
  return {d(fill.r), d(fill.g), d(fill.b)};
}

namespace {

constexpr int kLabelPadding = 2;
constexpr int kMaxLabelScale = 3;

const std::string& label_of(const Element& e) { return e.text ? *e.text : e.id; }

Rgb text_color(Rgb fill) {
  const int luma = (299 * fill.r + 587 * fill.g + 114 * fill.b) / 1000;
  return luma >= 128 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
}

}  // namespace

std::optional<PixelRect> label_box(const Element& e, ScreenDims dims) {
  const PixelRect r = to_pixel_rect(e.bbox, dims);
  const int inner_w = r.x1 - r.x0 - 2 * kLabelPadding;
  const int inner_h = r.y1 - r.y0 - 2 * kLabelPadding;
  if (inner_h < font::kGlyphHeight || inner_w < font::kGlyphWidth) return std::nullopt;
  const int scale = std::clamp(inner_h / (font::kGlyphHeight + 1), 1, kMaxLabelScale);
  const std::string& label = label_of(e);
  const std::size_t n = font::fitting_chars(label, inner_w, scale);
  if (n == 0) return std::nullopt;
  const int text_w = (static_cast<int>(n) - 1) * font::kAdvance * scale + font::kGlyphWidth * scale;
  const int text_h = font::kGlyphHeight * scale;
  const int x = r.x0 + kLabelPadding + (inner_w - text_w) / 2;
  const int y = r.y0 + kLabelPadding + (inner_h - text_h) / 2;
  return PixelRect{x, y, x + text_w, y + text_h};
}

Image render_screen(const ScreenModel& screen, ScreenDims dims) {
  Image img(dims, screen.background);
  for (const auto& e : screen.elements) {
    const PixelRect r = to_pixel_rect(e.bbox, dims);
    img.fill_rect(r, e.fill_color);
    img.stroke_rect(r, border_color(e.fill_color));
    if (const auto box = label_box(e, dims)) {
      const int scale = (box->y1 - box->y0) / font::kGlyphHeight;
      const std::string& label = label_of(e);
      const std::size_t n = font::fitting_chars(label, box->x1 - box->x0, scale);
      font::draw_text(img, box->x0, box->y0, std::string_view(label).substr(0, n), scale,
                      text_color(e.fill_color));
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// Environment

std::string_view outcome_name(ApplyOutcome::Kind k) {
  switch (k) {
    case ApplyOutcome::Kind::Transitioned: return "transitioned";
    case ApplyOutcome::Kind::NoOp: return "no_op";
    case ApplyOutcome::Kind::Stopped: return "stopped";
  }
  return "no_op";
}

bool goal_holds(const GoalPredicate& goal, const std::string& screen,
                const std::map<std::string, std::string>& state) {
  if (goal.screen && *goal.screen != screen) return false;
  for (const auto& [k, v] : goal.state) {
    auto it = state.find(k);
    if (it == state.end() || it->second != v) return false;
  }
  return true;
}

Environment::Environment(std::shared_ptr<const EnvSpec> spec)
    : spec_(std::move(spec)), screen_(spec_->initial_screen) {}

Observation Environment::observe() const {
  const ScreenModel* screen = spec_->find_screen(screen_);
  const Image img = render_screen(*screen, spec_->render_dims);
  // Aliasing pointer: shares ownership of the spec, points at the screen.
  std::shared_ptr<const ScreenModel> model(spec_, screen);
  return Observation{encode_png(img), spec_->render_dims, std::move(model)};
}

std::optional<std::string> Environment::hit_test(NormalizedPoint p) const {
  const ScreenModel* screen = spec_->find_screen(screen_);
  for (auto it = screen->elements.rbegin(); it != screen->elements.rend(); ++it) {
    if (point_in_bbox(p, it->bbox)) return it->id;
  }
  return std::nullopt;
}

bool Environment::is_goal() const { return goal_holds(spec_->goal, screen_, state_); }

ApplyOutcome Environment::apply_action(const ActionTriplet& a) {
  return apply(a.operation(), a.location(), a.value());
}

ApplyOutcome Environment::apply_command(std::string_view command) {
  const ParsedCommand cmd = parse_command(command);
  std::optional<NormalizedPoint> where;
  if (cmd.pixel) where = unscale_point(*cmd.pixel, spec_->render_dims);
  return apply(cmd.op, where, cmd.value);
}

ApplyOutcome Environment::apply(OpKind op, std::optional<NormalizedPoint> where,
                                const std::optional<std::string>& value) {
  ApplyOutcome out;
  if (stopped_) {
    out.screen = screen_;
    return out;
  }
  if (op == OpKind::Stop) {
    stopped_ = true;
    out.kind = ApplyOutcome::Kind::Stopped;
    out.screen = screen_;
    return out;
  }
  if (op != OpKind::Hotkey && where) out.element = hit_test(*where);

  // Element-specific beats screen-wide; an exact value beats a wildcard.
  const Transition* best = nullptr;
  int best_rank = -1;
  for (const auto& t : spec_->transitions) {
    if (t.from_screen != screen_ || t.operation != op) continue;
    if (t.element && t.element != out.element) continue;
    if (t.value_pattern && t.value_pattern != value) continue;
    const int rank = (t.element ? 2 : 0) + (t.value_pattern ? 1 : 0);
    if (rank > best_rank) {
      best = &t;
      best_rank = rank;
    }
  }
  if (best) {
    screen_ = best->to_screen;
    if (best->state_effect) state_[best->state_effect->first] = best->state_effect->second;
    out.kind = ApplyOutcome::Kind::Transitioned;
  }
  out.screen = screen_;
  return out;
}

Environment load_env(const std::filesystem::path& spec_file) {
  json j;
  try {
    j = json::parse(read_text_file(spec_file));
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("invalid JSON: ") + e.what());
  }
  return Environment(std::make_shared<const EnvSpec>(parse_env_spec(j)));
}

}  // namespace guiagent::sim
