#include <cstdlib>
#include <cstring>

#include "guiagent/kernels.hpp"

namespace guiagent::kernels {

namespace scalar {

void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  for (std::size_t i = 0; i + 2 < pixels.size(); i += 3) {
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
  }
}

std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const bool in = boxes.x0[i] <= px[i] && px[i] <= boxes.x1[i] && boxes.y0[i] <= py[i] &&
                    py[i] <= boxes.y1[i];
    out[i] = in ? 1 : 0;
    hits += in ? 1 : 0;
  }
  return hits;
}

}  // namespace scalar

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(GUIAGENT_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(GUIAGENT_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("GUIAGENT_ISA"); forced && std::strcmp(forced, "scalar") == 0) {
    return Isa::Scalar;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  switch (active_isa()) {
#if defined(GUIAGENT_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return avx2::fill_rgb(pixels, r, g, b);
#endif
#if defined(GUIAGENT_HAVE_NEON_KERNELS)
    case Isa::Neon: return neon::fill_rgb(pixels, r, g, b);
#endif
    default: return scalar::fill_rgb(pixels, r, g, b);
  }
}

std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out) {
  switch (active_isa()) {
#if defined(GUIAGENT_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return avx2::points_in_boxes(px, py, boxes, out);
#endif
#if defined(GUIAGENT_HAVE_NEON_KERNELS)
    case Isa::Neon: return neon::points_in_boxes(px, py, boxes, out);
#endif
    default: return scalar::points_in_boxes(px, py, boxes, out);
  }
}

}  // namespace guiagent::kernels
