#include "guiagent/parsing.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <regex>

#include "text_util.hpp"

namespace guiagent {

std::string_view family_name(PatternFamily f) {
  switch (f) {
    case PatternFamily::ParenPair: return "PAREN_PAIR";
    case PatternFamily::DashXY: return "DASH_XY";
    case PatternFamily::TopLeft: return "TOP_LEFT";
    case PatternFamily::ParenXY: return "PAREN_XY";
  }
  return "PAREN_PAIR";
}

namespace {

// Four alternations with capture groups (1,2), (3,4), (5,6), (7,8). The Left
// value of the Top/Left form only accepts decimals.
constexpr const char* kCoordinatePattern =
    R"([\(\[\s]*([-+]?\d*\.\d+|\d+)\s*,\s*([-+]?\d*\.\d+|\d+)\s*[\)\]\s]*)"
    R"(|-\s*[Xx]:\s*([-+]?\d*\.\d+|\d+)\s*(?:\([^\)]*\))?\s*-\s*[Yy]:\s*([-+]?\d*\.\d+|\d+)\s*(?:\([^\)]*\))?)"
    R"(|-\s*[Tt]op:\s*([-+]?\d*\.\d+|\d+)\s*-\s*[Ll]eft:\s*([-+]?\d*\.\d+))"
    R"(|\(\s*[Xx]:\s*([-+]?\d*\.\d+|\d+)\s*,\s*[Yy]:\s*([-+]?\d*\.\d+|\d+)\s*\))";

const std::regex& coordinate_regex() {
  static const std::regex re(kCoordinatePattern, std::regex::ECMAScript | std::regex::optimize);
  return re;
}

double to_double(const std::csub_match& m) {
  std::string_view s(m.first, static_cast<std::size_t>(m.length()));
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

std::optional<RawPointParse> extract_point(std::string_view text) {
  std::cmatch m;
  if (!std::regex_search(text.data(), text.data() + text.size(), m, coordinate_regex())) {
    return std::nullopt;
  }
  auto both = [&](int a, int b) { return m[a].matched && m[b].matched; };
  if (both(1, 2)) return RawPointParse{to_double(m[1]), to_double(m[2]), PatternFamily::ParenPair};
  if (both(3, 4)) return RawPointParse{to_double(m[3]), to_double(m[4]), PatternFamily::DashXY};
  if (both(5, 6)) return RawPointParse{to_double(m[6]), to_double(m[5]), PatternFamily::TopLeft};
  return RawPointParse{to_double(m[7]), to_double(m[8]), PatternFamily::ParenXY};
}

LocatedPoint point_with_fallback(std::string_view text, ScreenDims dims) {
  LocatedPoint out;
  out.raw = extract_point(text);
  if (!out.raw) {
    out.fallback = true;
    out.point = NormalizedPoint(0.5, 0.5);
    return out;
  }
  double x = out.raw->x;
  double y = out.raw->y;
  if (x > 1.0 || y > 1.0) {
    out.pixel_space = true;
    x /= dims.width;
    y /= dims.height;
  }
  out.point = NormalizedPoint::clamped(x, y);
  return out;
}

// ---------------------------------------------------------------------------
// Labeled step fields

namespace {

enum class Field { Action, Value, Description };

struct Label {
  Field field;
  std::string_view lower;
};

constexpr std::array<Label, 3> kLabels = {{
    {Field::Description, "element description"},
    {Field::Action, "action"},
    {Field::Value, "value"},
}};

struct LabelHit {
  Field field;
  std::size_t start;        // first char of the label
  std::size_t value_begin;  // first char after the colon
};

bool is_decoration(char c) { return c == '*' || c == '-' || c == '#' || c == '>' || c == '_'; }

// A label counts only at the start of a line (after optional list/markdown
// decoration) or right after a comma or semicolon.
bool at_field_boundary(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  while (i > 0 && (text[i - 1] == ' ' || text[i - 1] == '\t' || is_decoration(text[i - 1]))) --i;
  return i == 0 || text[i - 1] == '\n' || text[i - 1] == '\r' || text[i - 1] == ',' ||
         text[i - 1] == ';';
}

std::vector<LabelHit> find_labels(std::string_view text) {
  const std::string lower = text::to_lower(text);
  std::vector<LabelHit> hits;
  for (std::size_t pos = 0; pos < lower.size(); ++pos) {
    for (const Label& label : kLabels) {
      if (lower.compare(pos, label.lower.size(), label.lower) != 0) continue;
      std::size_t after = pos + label.lower.size();
      while (after < lower.size() && lower[after] == '*') ++after;
      if (after >= lower.size() || lower[after] != ':') continue;
      if (!at_field_boundary(text, pos)) continue;
      ++after;
      while (after < lower.size() && lower[after] == '*') ++after;
      hits.push_back({label.field, pos, after});
      pos = after - 1;
      break;
    }
  }
  return hits;
}

bool has_suffix(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string_view strip_one_layer(std::string_view s) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kPairs = {{
      {"\"", "\""},
      {"'", "'"},
      {"`", "`"},
      {"`", "'"},
      {"[", "]"},
      {"“", "”"},
      {"‘", "’"},
  }};
  for (const auto& [open, close] : kPairs) {
    if (s.size() >= open.size() + close.size() && s.substr(0, open.size()) == open &&
        has_suffix(s, close)) {
      return s.substr(open.size(), s.size() - open.size() - close.size());
    }
  }
  return s;
}

bool is_null_value(std::string_view v) {
  const std::string lower = text::to_lower(v);
  return lower.empty() || lower == "none" || lower == "null" || lower == "n/a" || lower == "-";
}

}  // namespace

StructuredStep parse_structured_step(std::string_view text) {
  const std::vector<LabelHit> hits = find_labels(text);

  std::array<std::optional<std::string_view>, 3> fields;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    auto& slot = fields[static_cast<std::size_t>(hits[i].field)];
    if (slot) continue;
    std::size_t end = i + 1 < hits.size() ? hits[i + 1].start : text.size();
    const std::size_t eol = text.find_first_of("\r\n", hits[i].value_begin);
    if (eol != std::string_view::npos) end = std::min(end, eol);
    std::string_view value = text.substr(hits[i].value_begin, end - hits[i].value_begin);
    // Drop the separator that precedes the next label.
    value = text::trim(value);
    while (!value.empty() && (value.back() == ',' || value.back() == ';' || value.back() == '*' ||
                              text::is_space(value.back()))) {
      value.remove_suffix(1);
    }
    slot = value;
  }

  const auto& action = fields[static_cast<std::size_t>(Field::Action)];
  if (!action) {
    throw StepParseError(StepParseError::Kind::MissingAction, "no 'Action:' field in response");
  }

  StructuredStep step;
  step.operation_name = std::string(text::trim(strip_one_layer(*action)));
  if (const auto& v = fields[static_cast<std::size_t>(Field::Value)]; v && !is_null_value(*v)) {
    step.value = std::string(strip_one_layer(*v));
  }
  if (const auto& d = fields[static_cast<std::size_t>(Field::Description)]) {
    step.description = std::string(strip_one_layer(*d));
  }
  step.rationale = std::string(text::trim(text.substr(0, hits.front().start)));
  // Remove list decoration left in front of the first label.
  while (!step.rationale.empty() && is_decoration(step.rationale.back())) {
    step.rationale.pop_back();
    step.rationale = std::string(text::trim(step.rationale));
  }

  if (step.description.empty() && text::to_upper(step.operation_name) != "STOP") {
    throw StepParseError(StepParseError::Kind::MissingDescription,
                         "operation '" + step.operation_name + "' without 'Element Description:'");
  }
  return step;
}

std::string render_structured_step(const StructuredStep& step) {
  std::string out;
  if (!step.rationale.empty()) out += step.rationale + "\n";
  out += "Action: " + step.operation_name + "\n";
  if (step.value) out += "Value: \"" + *step.value + "\"\n";
  if (!step.description.empty()) out += "Element Description: \"" + step.description + "\"\n";
  return out;
}

}  // namespace guiagent
