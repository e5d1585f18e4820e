#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verm/core/doc.hpp"

namespace verm {

/// FNV-1a over (width, height, pixels), little-endian dimensions.
std::uint64_t content_hash(int width, int height, std::span<const std::uint8_t> pixels);

std::string hash_hex(std::uint64_t hash);

/// Row-major RGBA8 image. Construct through make() so the hash always
/// matches the buffer.
class RasterImage {
 public:
  RasterImage() = default;
  static RasterImage make(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::uint64_t content_hash() const { return hash_; }

  bool operator==(const RasterImage& o) const {
    return width_ == o.width_ && height_ == o.height_ && hash_ == o.hash_ && pixels_ == o.pixels_;
  }

 private:
  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> pixels_;
  std::uint64_t hash_ = 0;
};

/// Aliased integer drawing surface. Everything snaps to whole pixels and
/// blending is integer arithmetic, so output is byte-stable everywhere.
class Canvas {
 public:
  Canvas(int width, int height, Rgb background);
  /// Fully transparent surface, used as a per-primitive coverage layer.
  Canvas(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  void set_clip(int x0, int y0, int x1, int y1);  // half-open
  void reset_clip();

  void blend(int x, int y, Rgb c, std::uint8_t alpha = 255);
  void fill_rect(int x0, int y0, int x1, int y1, Rgb c, std::uint8_t alpha = 255);  // half-open
  void outline_rect(int x0, int y0, int x1, int y1, Rgb c);
  void line(int x0, int y0, int x1, int y1, int thickness, Rgb c);
  void fill_circle(int cx, int cy, int r, Rgb c);

  /// Draws printable ASCII; other bytes render as '?'.
  void text(int x, int y, std::string_view s, Rgb c, int scale = 1);

  /// Blends every covered pixel of `layer` onto this canvas at `alpha`.
  void composite(const Canvas& layer, std::uint8_t alpha);

  RasterImage finish() &&;

 private:
  bool inside(int x, int y) const {
    return x >= clip_x0_ && y >= clip_y0_ && x < clip_x1_ && y < clip_y1_;
  }

  int width_, height_;
  int clip_x0_, clip_y0_, clip_x1_, clip_y1_;
  std::vector<std::uint8_t> px_;
};

inline constexpr int kGlyphWidth = 6;
inline constexpr int kGlyphHeight = 11;

int text_width(std::string_view s, int scale = 1);

/// Rows of the bitmap glyph for `ch`; bit 5 is the leftmost column.
std::span<const std::uint8_t, kGlyphHeight> glyph(char ch);

inline std::uint8_t opacity_alpha(double opacity) {
  if (!(opacity > 0.0)) return 0;
  if (opacity >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(opacity * 255.0));
}

}  // namespace verm
