#pragma once

#include <optional>
#include <string>

#include "verm/core/doc.hpp"
#include "verm/render/raster.hpp"

namespace verm {

/// Outcome of one rasterization. Exactly one of image/diagnostic is set.
class RenderResult {
 public:
  static RenderResult ok(RasterImage image) { return RenderResult(std::move(image), {}); }
  static RenderResult failure(std::string diagnostic) {
    return RenderResult(std::nullopt, std::move(diagnostic));
  }

  bool success() const { return image_.has_value(); }
  const RasterImage& image() const { return *image_; }
  const std::string& diagnostic() const { return diagnostic_; }

  bool operator==(const RenderResult&) const = default;

 private:
  RenderResult(std::optional<RasterImage> image, std::string diagnostic)
      : image_(std::move(image)), diagnostic_(std::move(diagnostic)) {}

  std::optional<RasterImage> image_;
  std::string diagnostic_;
};

/// Built-in deterministic renderer for all three tasks. Invalid documents
/// come back as failures naming the violated rule, never as exceptions.
RenderResult render(const StructuredDoc& doc);

namespace chart_layout {
inline constexpr int kMarginLeft = 56;
inline constexpr int kMarginRight = 16;
inline constexpr int kMarginTop = 40;
inline constexpr int kMarginBottom = 40;
}  // namespace chart_layout

inline constexpr int kTableCellPadding = 8;

}  // namespace verm
