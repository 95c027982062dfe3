#pragma once

// Data-parallel inner loops used by the rasterizer and the grounding scorer.
// Each kernel has a scalar reference and, where the target supports it, an
// AVX2 (x86-64) or NEON (aarch64) variant. The dispatching entry points pick
// the best variant once at first use; GUIAGENT_ISA=scalar forces the
// reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace guiagent::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
/// Variant used by the dispatching entry points.
Isa active_isa();
/// True when `isa` can run on this machine.
bool isa_available(Isa isa);

/// Structure-of-arrays rectangle list; all spans have equal length.
struct BoxesSoA {
  std::span<const double> x0, y0, x1, y1;
};

/// Fills `pixels` (packed RGB, size divisible by 3) with one color.
void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// out[i] = x0[i] <= px[i] <= x1[i] && y0[i] <= py[i] <= y1[i] (NaN never
/// hits). Returns the number of hits.
std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out);

namespace scalar {
void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define GUIAGENT_HAVE_AVX2_KERNELS 1
namespace avx2 {
void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define GUIAGENT_HAVE_NEON_KERNELS 1
namespace neon {
void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out);
}  // namespace neon
#endif

}  // namespace guiagent::kernels
