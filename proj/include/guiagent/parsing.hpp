#pragma once

// Extraction of coordinates and labeled steps from free-form model replies.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "guiagent/action.hpp"

namespace guiagent {

/// Which alternation of the coordinate pattern matched.
enum class PatternFamily {
  ParenPair,  // (a, b)  [a, b]  a, b
  DashXY,     // - X: a (note) - Y: b (note)
  TopLeft,    // - Top: a - Left: b   -> (b, a)
  ParenXY,    // (X: a, Y: b)
};

std::string_view family_name(PatternFamily f);

struct RawPointParse {
  double x = 0;
  double y = 0;
  PatternFamily family = PatternFamily::ParenPair;
};

/// First match wins, scanning left to right with the alternations tried in
/// the order listed in PatternFamily. Values are returned as written.
/// nullopt means no coordinates were found.
std::optional<RawPointParse> extract_point(std::string_view text);

struct LocatedPoint {
  NormalizedPoint point;
  std::optional<RawPointParse> raw;  // empty on fallback
  bool fallback = false;
  bool pixel_space = false;  // raw values were divided by dims
};

/// Total: extract, treat the pair as pixels if either value exceeds 1,
/// clamp into [0,1]^2, and fall back to the screen center when nothing parses.
LocatedPoint point_with_fallback(std::string_view text, ScreenDims dims);

/// The interpreter's structured output (description, operation, value)
/// plus whatever prose preceded it.
struct StructuredStep {
  std::string description;
  std::string operation_name;
  std::optional<std::string> value;
  std::string rationale;

  friend bool operator==(const StructuredStep&, const StructuredStep&) = default;
};

class StepParseError : public std::runtime_error {
 public:
  enum class Kind { MissingAction, MissingDescription };
  StepParseError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Reads the `Action:`, `Value:` and `Element Description:` fields (any order,
/// any case, newline- or comma-separated). One symmetric layer of quotes,
/// backticks or brackets is stripped from each value. A Value of
/// none/null/n/a or empty counts as absent.
StructuredStep parse_structured_step(std::string_view text);

/// Renders a step in the labeled-field layout parse_structured_step reads;
/// parse(render(s)) == s for single-line fields.
std::string render_structured_step(const StructuredStep& step);

}  // namespace guiagent
