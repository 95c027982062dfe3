#include "guiagent/kernels.hpp"

#if defined(GUIAGENT_HAVE_NEON_KERNELS)

#include <arm_neon.h>

namespace guiagent::kernels::neon {

void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  uint8x16x3_t rgb;
  rgb.val[0] = vdupq_n_u8(r);
  rgb.val[1] = vdupq_n_u8(g);
  rgb.val[2] = vdupq_n_u8(b);
  const std::size_t n = pixels.size() - pixels.size() % 3;
  std::size_t i = 0;
  for (; i + 48 <= n; i += 48) vst3q_u8(pixels.data() + i, rgb);
  scalar::fill_rgb(pixels.subspan(i, n - i), r, g, b);
}

std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out) {
  const std::size_t n = px.size();
  std::size_t hits = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(px.data() + i);
    const float64x2_t y = vld1q_f64(py.data() + i);
    uint64x2_t m = vcleq_f64(vld1q_f64(boxes.x0.data() + i), x);
    m = vandq_u64(m, vcleq_f64(x, vld1q_f64(boxes.x1.data() + i)));
    m = vandq_u64(m, vcleq_f64(vld1q_f64(boxes.y0.data() + i), y));
    m = vandq_u64(m, vcleq_f64(y, vld1q_f64(boxes.y1.data() + i)));
    const auto a = static_cast<std::uint8_t>(vgetq_lane_u64(m, 0) & 1);
    const auto b = static_cast<std::uint8_t>(vgetq_lane_u64(m, 1) & 1);
    out[i] = a;
    out[i + 1] = b;
    hits += a + b;
  }
  if (i < n) {
    BoxesSoA tail{boxes.x0.subspan(i), boxes.y0.subspan(i), boxes.x1.subspan(i),
                  boxes.y1.subspan(i)};
    hits += scalar::points_in_boxes(px.subspan(i), py.subspan(i), tail, out.subspan(i));
  }
  return hits;
}

}  // namespace guiagent::kernels::neon

#endif
