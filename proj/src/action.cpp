#include "guiagent/action.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "text_util.hpp"

namespace guiagent {

NormalizedPoint::NormalizedPoint(double x_, double y_) : x(x_), y(y_) {
  if (!(x_ >= 0.0 && x_ <= 1.0 && y_ >= 0.0 && y_ <= 1.0)) {
    throw std::invalid_argument("normalized point outside [0,1]^2");
  }
}

NormalizedPoint NormalizedPoint::clamped(double x, double y) {
  auto c = [](double v) { return std::isnan(v) ? 0.5 : std::clamp(v, 0.0, 1.0); };
  return NormalizedPoint(c(x), c(y));
}

ScreenDims::ScreenDims(int w, int h) : width(w), height(h) {
  if (w < 1 || h < 1) throw std::invalid_argument("screen dims must be >= 1");
}

ValueArity value_arity(OpKind op) {
  switch (op) {
    case OpKind::Type:
    case OpKind::Select:
    case OpKind::Hotkey:
      return ValueArity::Text;
    case OpKind::Scroll:
      return ValueArity::SignedAmount;
    case OpKind::Click:
    case OpKind::Stop:
      break;
  }
  return ValueArity::None;
}

std::string_view op_name(OpKind op) {
  switch (op) {
    case OpKind::Click: return "CLICK";
    case OpKind::Type: return "TYPE";
    case OpKind::Select: return "SELECT";
    case OpKind::Scroll: return "SCROLL";
    case OpKind::Hotkey: return "HOTKEY";
    case OpKind::Stop: return "STOP";
  }
  return "STOP";
}

std::optional<OpKind> parse_op(std::string_view name) {
  const std::string upper = text::to_upper(text::trim(name));
  for (OpKind op : kAllOps) {
    if (upper == op_name(op)) return op;
  }
  return std::nullopt;
}

namespace {

std::optional<long long> parse_signed(std::string_view s) {
  s = text::trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

ActionTriplet validate_triplet(std::string_view op_text, std::optional<std::string> value,
                               std::optional<NormalizedPoint> loc) {
  const auto op = parse_op(op_text);
  if (!op) {
    throw ActionError(ActionError::Kind::UnknownOperation,
                      "unknown operation '" + std::string(op_text) + "'");
  }
  const std::string name(op_name(*op));
  switch (value_arity(*op)) {
    case ValueArity::None:
      if (value) throw ActionError(ActionError::Kind::UnexpectedValue, name + " takes no value");
      break;
    case ValueArity::Text:
      if (!value) throw ActionError(ActionError::Kind::MissingValue, name + " requires a value");
      break;
    case ValueArity::SignedAmount: {
      if (!value) throw ActionError(ActionError::Kind::MissingValue, name + " requires an amount");
      const auto amount = parse_signed(*value);
      if (!amount) {
        throw ActionError(ActionError::Kind::InvalidValue,
                          name + " amount is not a signed integer: '" + *value + "'");
      }
      value = std::to_string(*amount);
      break;
    }
  }
  if (*op == OpKind::Stop) {
    if (loc) throw ActionError(ActionError::Kind::UnexpectedLocation, "STOP takes no location");
  } else if (!loc) {
    throw ActionError(ActionError::Kind::MissingLocation, name + " requires a location");
  }
  return ActionTriplet(*op, loc, std::move(value));
}

ActionTriplet ActionTriplet::click(NormalizedPoint p) {
  return validate_triplet("CLICK", std::nullopt, p);
}

ActionTriplet ActionTriplet::type(NormalizedPoint p, std::string text) {
  return validate_triplet("TYPE", std::move(text), p);
}

ActionTriplet ActionTriplet::stop() { return validate_triplet("STOP", std::nullopt, std::nullopt); }

PixelPoint scale_point(NormalizedPoint p, ScreenDims dims) {
  auto axis = [](double v, int dim) {
    const double scaled = std::floor(v * dim + 0.5);
    return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(dim - 1)));
  };
  return {axis(p.x, dims.width), axis(p.y, dims.height)};
}

NormalizedPoint unscale_point(PixelPoint px, ScreenDims dims) {
  return NormalizedPoint::clamped(static_cast<double>(px.x) / dims.width,
                                  static_cast<double>(px.y) / dims.height);
}

std::string escape_command_text(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (unsigned char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c >= 0x7f) {
          char buf[5];
          std::snprintf(buf, sizeof buf, "\\x%02X", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

std::string serialize_action(const ActionTriplet& a, ScreenDims dims) {
  std::string out;
  auto coords = [&] {
    const PixelPoint px = scale_point(*a.location(), dims);
    return std::to_string(px.x) + ", " + std::to_string(px.y);
  };
  auto quoted = [&] { return "\"" + escape_command_text(*a.value()) + "\""; };
  switch (a.operation()) {
    case OpKind::Click: return "click(" + coords() + ")";
    case OpKind::Type: return "type(" + coords() + ", " + quoted() + ")";
    case OpKind::Select: return "select(" + coords() + ", " + quoted() + ")";
    case OpKind::Scroll: return "scroll(" + coords() + ", " + *a.value() + ")";
    case OpKind::Hotkey: return "hotkey(" + quoted() + ")";
    case OpKind::Stop: return "stop()";
  }
  return out;
}

namespace {

class CommandReader {
 public:
  explicit CommandReader(std::string_view s) : s_(s) {}

  void expect(std::string_view lit) {
    if (s_.substr(pos_, lit.size()) != lit) fail("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  std::string_view ident() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= 'a' && s_[pos_] <= 'z') ++pos_;
    return s_.substr(start, pos_ - start);
  }

  long long integer() {
    const std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc{} || ptr != s_.data() + pos_) fail("expected integer");
    return v;
  }

  std::string quoted() {
    expect("\"");
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= s_.size()) fail("dangling escape");
      c = s_[pos_++];
      switch (c) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'x': {
          if (pos_ + 2 > s_.size()) fail("short \\x escape");
          unsigned v = 0;
          auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + 2, v, 16);
          if (ec != std::errc{} || ptr != s_.data() + pos_ + 2) fail("bad \\x escape");
          out += static_cast<char>(v);
          pos_ += 2;
          break;
        }
        default: fail("unknown escape");
      }
    }
    expect("\"");
    return out;
  }

  PixelPoint pixel() {
    const long long x = integer();
    expect(", ");
    const long long y = integer();
    return {static_cast<int>(x), static_cast<int>(y)};
  }

  void finish() {
    if (pos_ != s_.size()) fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw CommandSyntaxError("command syntax error at column " + std::to_string(pos_) + ": " +
                             why);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedCommand parse_command(std::string_view line) {
  CommandReader r(line);
  const std::string_view name = r.ident();
  ParsedCommand cmd;
  r.expect("(");
  if (name == "click") {
    cmd.op = OpKind::Click;
    cmd.pixel = r.pixel();
  } else if (name == "type" || name == "select") {
    cmd.op = name == "type" ? OpKind::Type : OpKind::Select;
    cmd.pixel = r.pixel();
    r.expect(", ");
    cmd.value = r.quoted();
  } else if (name == "scroll") {
    cmd.op = OpKind::Scroll;
    cmd.pixel = r.pixel();
    r.expect(", ");
    cmd.value = std::to_string(r.integer());
  } else if (name == "hotkey") {
    cmd.op = OpKind::Hotkey;
    cmd.value = r.quoted();
  } else if (name == "stop") {
    cmd.op = OpKind::Stop;
  } else {
    r.fail("unknown command '" + std::string(name) + "'");
  }
  r.expect(")");
  r.finish();
  return cmd;
}

}  // namespace guiagent
