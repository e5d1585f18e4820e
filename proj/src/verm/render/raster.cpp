#include "verm/render/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace verm {

namespace {

constexpr std::uint8_t kFont[95][kGlyphHeight] = {
#include "verm/render/font_data.inc"
};

}  // namespace

std::uint64_t content_hash(int width, int height, std::span<const std::uint8_t> pixels) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  for (int v : {width, height}) {
    const auto u = static_cast<std::uint32_t>(v);
    for (int s = 0; s < 32; s += 8) feed(static_cast<std::uint8_t>(u >> s));
  }
  for (std::uint8_t b : pixels) feed(b);
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RasterImage RasterImage::make(int width, int height, std::vector<std::uint8_t> pixels) {
  RasterImage img;
  img.width_ = width;
  img.height_ = height;
  img.pixels_ = std::move(pixels);
  img.hash_ = verm::content_hash(width, height, img.pixels_);
  return img;
}

std::span<const std::uint8_t, kGlyphHeight> glyph(char ch) {
  int code = static_cast<unsigned char>(ch);
  if (code < 32 || code > 126) code = '?';
  return std::span<const std::uint8_t, kGlyphHeight>(kFont[code - 32], kGlyphHeight);
}

int text_width(std::string_view s, int scale) {
  return static_cast<int>(s.size()) * kGlyphWidth * scale;
}

Canvas::Canvas(int width, int height, Rgb background)
    : width_(width),
      height_(height),
      clip_x0_(0),
      clip_y0_(0),
      clip_x1_(width),
      clip_y1_(height),
      px_(static_cast<std::size_t>(width) * height * 4) {
  for (std::size_t i = 0; i < px_.size(); i += 4) {
    px_[i] = background.r;
    px_[i + 1] = background.g;
    px_[i + 2] = background.b;
    px_[i + 3] = 255;
  }
}

Canvas::Canvas(int width, int height)
    : width_(width),
      height_(height),
      clip_x0_(0),
      clip_y0_(0),
      clip_x1_(width),
      clip_y1_(height),
      px_(static_cast<std::size_t>(width) * height * 4, 0) {}

void Canvas::composite(const Canvas& layer, std::uint8_t alpha) {
  const int w = std::min(width_, layer.width_), h = std::min(height_, layer.height_);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* q = &layer.px_[(static_cast<std::size_t>(y) * layer.width_ + x) * 4];
      if (q[3] == 0) continue;
      blend(x, y, Rgb{q[0], q[1], q[2]}, alpha);
    }
}

void Canvas::set_clip(int x0, int y0, int x1, int y1) {
  clip_x0_ = std::max(0, x0);
  clip_y0_ = std::max(0, y0);
  clip_x1_ = std::min(width_, x1);
  clip_y1_ = std::min(height_, y1);
}

void Canvas::reset_clip() { set_clip(0, 0, width_, height_); }

void Canvas::blend(int x, int y, Rgb c, std::uint8_t alpha) {
  if (!inside(x, y) || alpha == 0) return;
  std::uint8_t* p = &px_[(static_cast<std::size_t>(y) * width_ + x) * 4];
  if (alpha == 255) {
    p[0] = c.r, p[1] = c.g, p[2] = c.b, p[3] = 255;
    return;
  }
  const unsigned a = alpha, ia = 255 - alpha;
  p[0] = static_cast<std::uint8_t>((c.r * a + p[0] * ia + 127) / 255);
  p[1] = static_cast<std::uint8_t>((c.g * a + p[1] * ia + 127) / 255);
  p[2] = static_cast<std::uint8_t>((c.b * a + p[2] * ia + 127) / 255);
}

void Canvas::fill_rect(int x0, int y0, int x1, int y1, Rgb c, std::uint8_t alpha) {
  x0 = std::max(x0, clip_x0_), y0 = std::max(y0, clip_y0_);
  x1 = std::min(x1, clip_x1_), y1 = std::min(y1, clip_y1_);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) blend(x, y, c, alpha);
}

void Canvas::outline_rect(int x0, int y0, int x1, int y1, Rgb c) {
  if (x1 <= x0 || y1 <= y0) return;
  fill_rect(x0, y0, x1, y0 + 1, c);
  fill_rect(x0, y1 - 1, x1, y1, c);
  fill_rect(x0, y0, x0 + 1, y1, c);
  fill_rect(x1 - 1, y0, x1, y1, c);
}

void Canvas::line(int x0, int y0, int x1, int y1, int thickness, Rgb c) {
  thickness = std::max(1, thickness);
  const int lo = -(thickness - 1) / 2, hi = lo + thickness;
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    if (thickness == 1) blend(x0, y0, c);
    else fill_rect(x0 + lo, y0 + lo, x0 + hi, y0 + hi, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) err += dy, x0 += sx;
    if (e2 <= dx) err += dx, y0 += sy;
  }
}

void Canvas::fill_circle(int cx, int cy, int r, Rgb c) {
  for (int y = cy - r; y <= cy + r; ++y)
    for (int x = cx - r; x <= cx + r; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) blend(x, y, c);
}

void Canvas::text(int x, int y, std::string_view s, Rgb c, int scale) {
  for (char ch : s) {
    auto rows = glyph(ch);
    for (int gy = 0; gy < kGlyphHeight; ++gy)
      for (int gx = 0; gx < kGlyphWidth; ++gx)
        if (rows[gy] & (1u << (kGlyphWidth - 1 - gx)))
          fill_rect(x + gx * scale, y + gy * scale, x + (gx + 1) * scale, y + (gy + 1) * scale, c);
    x += kGlyphWidth * scale;
  }
}

RasterImage Canvas::finish() && { return RasterImage::make(width_, height_, std::move(px_)); }

}  // namespace verm
