#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>

#include "verm/corrupt/ops.hpp"

namespace verm {

/// One SFT training record. PNG paths are relative to the export directory.
struct SftRecord {
  std::string id;
  TaskKind task = TaskKind::Chart;
  std::string gt_png;
  std::string pred_png;
  DiscrepancyReport annotation;
  Provenance provenance = Provenance::Edit;
  std::uint64_t seed = 0;
  bool operator==(const SftRecord&) const = default;
};

Json to_json(const SftRecord& r);
SftRecord sft_record_from_json(const Json& j);

/// Renders both docs of every instance, writes images/<id>_gt.png and
/// images/<id>_pred.png plus one line per instance to sft.jsonl under
/// `out_dir`. Instances with a failing render are skipped with a logged
/// warning. Returns the number of records written.
std::size_t export_sft_records(std::span<const PairInstance> instances, const std::filesystem::path& out_dir);

}  // namespace verm
