#pragma once

#include "verm/core/doc.hpp"
#include "verm/core/report.hpp"

namespace verm {

/// Structural diff of two specs, phrased with the corruption catalog's
/// categories, grades and location templates. Equal docs give an empty
/// report.
DiscrepancyReport diff_docs(const StructuredDoc& gt, const StructuredDoc& pred);

/// Restores the element named by `item.location` in `prev` to its state in
/// `gt`, leaving everything else untouched. Unknown locations leave `prev`
/// unchanged.
StructuredDoc revert_error(const StructuredDoc& prev, const StructuredDoc& gt, const ErrorItem& item);

}  // namespace verm
