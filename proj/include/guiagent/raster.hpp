#pragma once

// RGB framebuffer, a fixed 5x7 bitmap font and PNG encode/decode.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "guiagent/geometry.hpp"

namespace guiagent {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

class Image {
 public:
  Image(ScreenDims dims, Rgb background);

  ScreenDims dims() const noexcept { return dims_; }
  int width() const noexcept { return dims_.width; }
  int height() const noexcept { return dims_.height; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  /// Clipped to the image.
  void fill_rect(PixelRect r, Rgb c);
  /// 1-pixel outline along the inside edge of `r`.
  void stroke_rect(PixelRect r, Rgb c);

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> row(int y);

 private:
  ScreenDims dims_;
  std::vector<std::uint8_t> pixels_;  // packed RGB, row-major
};

namespace font {
inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kAdvance = 6;  // glyph plus one column of spacing

/// Column-major glyph bits (bit 0 = top row). Characters outside printable
/// ASCII render as '?'.
std::span<const std::uint8_t, 5> glyph(char c);

/// Number of characters of `text` that fit in `max_width` pixels at `scale`.
std::size_t fitting_chars(std::string_view text, int max_width, int scale);

/// Draws at (x, y) = top-left of the first glyph; clipped to the image.
void draw_text(Image& img, int x, int y, std::string_view text, int scale, Rgb color);
}  // namespace font

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 8-bit RGB, no interlace, no ancillary chunks: equal images give equal bytes.
std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(std::span<const std::uint8_t> bytes);
/// Reads only the IHDR chunk.
ScreenDims png_dims(std::span<const std::uint8_t> bytes);

}  // namespace guiagent
