#pragma once

#include "guiagent/action.hpp"

namespace guiagent {

/// Normalized rectangle; well-formed boxes satisfy 0 <= x0 < x1 <= 1 and
/// 0 <= y0 < y1 <= 1.
struct Box {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool well_formed() const noexcept {
    return 0.0 <= x0 && x0 < x1 && x1 <= 1.0 && 0.0 <= y0 && y0 < y1 && y1 <= 1.0;
  }
  double area() const noexcept { return (x1 - x0) * (y1 - y0); }
  NormalizedPoint center() const { return NormalizedPoint((x0 + x1) / 2, (y0 + y1) / 2); }

  friend bool operator==(const Box&, const Box&) = default;
};

/// Inclusive on all four edges.
inline bool point_in_bbox(NormalizedPoint p, const Box& b) noexcept {
  return b.x0 <= p.x && p.x <= b.x1 && b.y0 <= p.y && p.y <= b.y1;
}

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool empty() const noexcept { return x1 <= x0 || y1 <= y0; }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Edges map through round-half-up(v * dim), clamped to [0, dim].
PixelRect to_pixel_rect(const Box& b, ScreenDims dims);

}  // namespace guiagent
