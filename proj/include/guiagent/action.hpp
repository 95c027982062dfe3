#pragma once

// Action model: normalized points, the closed operation set, action triplets
// and the single-line command grammar consumed by executors and the sim env.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace guiagent {

struct NormalizedPoint {
  double x = 0.5;
  double y = 0.5;

  NormalizedPoint() = default;
  /// Throws std::invalid_argument unless both coordinates are in [0, 1].
  NormalizedPoint(double x_, double y_);

  /// Clamps into [0, 1]; NaN maps to 0.5.
  static NormalizedPoint clamped(double x, double y);

  friend bool operator==(const NormalizedPoint&, const NormalizedPoint&) = default;
};

struct ScreenDims {
  int width = 1;
  int height = 1;

  ScreenDims() = default;
  ScreenDims(int w, int h);

  friend bool operator==(const ScreenDims&, const ScreenDims&) = default;
};

struct PixelPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

enum class OpKind : std::uint8_t { Click, Type, Select, Scroll, Hotkey, Stop };

inline constexpr std::array<OpKind, 6> kAllOps = {
    OpKind::Click, OpKind::Type, OpKind::Select, OpKind::Scroll, OpKind::Hotkey, OpKind::Stop};

enum class ValueArity : std::uint8_t { None, Text, SignedAmount };

ValueArity value_arity(OpKind op);
std::string_view op_name(OpKind op);
/// Case-insensitive, surrounding whitespace ignored. nullopt for anything
/// outside the closed set.
std::optional<OpKind> parse_op(std::string_view name);

class ActionError : public std::runtime_error {
 public:
  enum class Kind {
    UnknownOperation,
    MissingValue,
    UnexpectedValue,
    InvalidValue,
    MissingLocation,
    UnexpectedLocation,
  };
  ActionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// (location, operation, value). Only constructible through validate_triplet
/// or the named factories, so every instance satisfies the arity rules.
class ActionTriplet {
 public:
  static ActionTriplet click(NormalizedPoint p);
  static ActionTriplet type(NormalizedPoint p, std::string text);
  static ActionTriplet stop();

  OpKind operation() const noexcept { return op_; }
  const std::optional<NormalizedPoint>& location() const noexcept { return location_; }
  const std::optional<std::string>& value() const noexcept { return value_; }

  friend bool operator==(const ActionTriplet&, const ActionTriplet&) = default;

 private:
  friend ActionTriplet validate_triplet(std::string_view, std::optional<std::string>,
                                        std::optional<NormalizedPoint>);
  ActionTriplet(OpKind op, std::optional<NormalizedPoint> loc, std::optional<std::string> value)
      : op_(op), location_(loc), value_(std::move(value)) {}

  OpKind op_ = OpKind::Stop;
  std::optional<NormalizedPoint> location_;
  std::optional<std::string> value_;
};

ActionTriplet validate_triplet(std::string_view op, std::optional<std::string> value,
                               std::optional<NormalizedPoint> loc);

/// round-half-up(p * dim), clamped to [0, dim - 1].
PixelPoint scale_point(NormalizedPoint p, ScreenDims dims);
/// Inverse mapping used by command consumers: pixel / dim.
NormalizedPoint unscale_point(PixelPoint px, ScreenDims dims);

/// One line of the command grammar:
///   click(x, y) | type(x, y, "text") | select(x, y, "option")
///   scroll(x, y, amount) | hotkey("combo") | stop()
std::string serialize_action(const ActionTriplet& a, ScreenDims dims);

/// A command line parsed back into pixel space.
struct ParsedCommand {
  OpKind op = OpKind::Stop;
  std::optional<PixelPoint> pixel;
  std::optional<std::string> value;
  friend bool operator==(const ParsedCommand&, const ParsedCommand&) = default;
};

class CommandSyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict parser for the grammar emitted by serialize_action.
ParsedCommand parse_command(std::string_view line);

/// Backslash-escapes `"` and `\`; control and non-ASCII bytes become \n, \r,
/// \t or \xHH so a command always fits on one ASCII line.
std::string escape_command_text(std::string_view text);

}  // namespace guiagent
