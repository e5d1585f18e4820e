#include "verm/judge/coarse.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "verm/core/errors.hpp"

namespace verm {

namespace {

using Features = std::array<double, kCoarseGrid * kCoarseGrid * 3>;

Features cell_means(const RasterImage& img) {
  Features f{};
  const int w = img.width(), h = img.height();
  const auto px = img.pixels();
  for (int gy = 0; gy < kCoarseGrid; ++gy) {
    const int y0 = gy * h / kCoarseGrid, y1 = (gy + 1) * h / kCoarseGrid;
    for (int gx = 0; gx < kCoarseGrid; ++gx) {
      const int x0 = gx * w / kCoarseGrid, x1 = (gx + 1) * w / kCoarseGrid;
      std::array<std::uint64_t, 3> sum{};
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
          const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 4;
          for (int ch = 0; ch < 3; ++ch) sum[ch] += px[o + ch];
        }
      const double n = static_cast<double>(y1 - y0) * (x1 - x0);
      for (int ch = 0; ch < 3; ++ch) f[(gy * kCoarseGrid + gx) * 3 + ch] = sum[ch] / n / 127.5 - 1.0;
    }
  }
  return f;
}

}  // namespace

double coarse_similarity(const RasterImage& gt, const RasterImage& pred) {
  if (gt.width() != pred.width() || gt.height() != pred.height())
    throw DataError("coarse_similarity: image sizes differ (" + std::to_string(gt.width()) + "x" +
                    std::to_string(gt.height()) + " vs " + std::to_string(pred.width()) + "x" +
                    std::to_string(pred.height()) + ")");
  if (gt.width() < kCoarseGrid || gt.height() < kCoarseGrid)
    throw DataError("coarse_similarity: images must be at least 8x8");
  const Features a = cell_means(gt);
  const Features b = cell_means(pred);
  if (a == b) return 1.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.5;
  const double cosine = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
  return (cosine + 1.0) / 2.0;
}

}  // namespace verm
