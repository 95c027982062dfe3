// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cstring>

#include "guiagent/kernels.hpp"

namespace guiagent::kernels::avx2 {

void fill_rgb(std::span<std::uint8_t> pixels, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  // lcm(3, 32) = 96: three registers hold a whole number of pixels.
  alignas(32) std::uint8_t pattern[96];
  for (int i = 0; i < 96; i += 3) {
    pattern[i] = r;
    pattern[i + 1] = g;
    pattern[i + 2] = b;
  }
  const __m256i p0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern));
  const __m256i p1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 32));
  const __m256i p2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 64));

  const std::size_t n = pixels.size() - pixels.size() % 3;
  std::uint8_t* dst = pixels.data();
  std::size_t i = 0;
  for (; i + 96 <= n; i += 96) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), p0);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 32), p1);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 64), p2);
  }
  if (i < n) std::memcpy(dst + i, pattern, n - i);
}

std::size_t points_in_boxes(std::span<const double> px, std::span<const double> py,
                            const BoxesSoA& boxes, std::span<std::uint8_t> out) {
  const std::size_t n = px.size();
  std::size_t hits = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(px.data() + i);
    const __m256d y = _mm256_loadu_pd(py.data() + i);
    __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(boxes.x0.data() + i), x, _CMP_LE_OQ);
    m = _mm256_and_pd(m, _mm256_cmp_pd(x, _mm256_loadu_pd(boxes.x1.data() + i), _CMP_LE_OQ));
    m = _mm256_and_pd(m, _mm256_cmp_pd(_mm256_loadu_pd(boxes.y0.data() + i), y, _CMP_LE_OQ));
    m = _mm256_and_pd(m, _mm256_cmp_pd(y, _mm256_loadu_pd(boxes.y1.data() + i), _CMP_LE_OQ));
    const int mask = _mm256_movemask_pd(m);
    for (int lane = 0; lane < 4; ++lane) out[i + lane] = static_cast<std::uint8_t>((mask >> lane) & 1);
    hits += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  if (i < n) {
    BoxesSoA tail{boxes.x0.subspan(i), boxes.y0.subspan(i), boxes.x1.subspan(i),
                  boxes.y1.subspan(i)};
    hits += scalar::points_in_boxes(px.subspan(i), py.subspan(i), tail, out.subspan(i));
  }
  return hits;
}

}  // namespace guiagent::kernels::avx2
