#pragma once

#include "verm/render/raster.hpp"

namespace verm {

inline constexpr int kCoarseGrid = 8;

/// Text-blind baseline similarity in [0, 1]: cosine of per-cell mean RGB
/// vectors over an 8x8 grid, with channels centred to [-1, 1] and the
/// cosine mapped from [-1, 1] onto [0, 1]. Throws DataError when the
/// images differ in size or are smaller than the grid.
double coarse_similarity(const RasterImage& gt, const RasterImage& pred);

}  // namespace verm
