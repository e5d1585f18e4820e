#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verm/core/doc.hpp"
#include "verm/core/errors.hpp"
#include "verm/core/report.hpp"
#include "verm/render/raster.hpp"

namespace verm {

struct JudgeInput {
  TaskKind task = TaskKind::Chart;
  RasterImage gt_image;
  RasterImage pred_image;
  std::optional<StructuredDoc> gt_doc;
  std::optional<StructuredDoc> pred_doc;
};

struct JudgeVerdict {
  DiscrepancyReport report;
  std::optional<std::string> raw;
  bool operator==(const JudgeVerdict&) const = default;
};

/// Implementations must be safe to call from several threads at once.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual JudgeVerdict judge(const JudgeInput& input) = 0;
  virtual std::string name() const = 0;
};

/// Spec diff of the attached docs. Throws DataError("oracle requires
/// specs") when either doc is missing.
JudgeVerdict oracle_judge(const JudgeInput& input);

class OracleJudge final : public Judge {
 public:
  JudgeVerdict judge(const JudgeInput& input) override { return oracle_judge(input); }
  std::string name() const override { return "oracle"; }
};

/// Per-input result of a batch run: a verdict or the failure that
/// prevented one.
struct JudgeOutcome {
  std::optional<JudgeVerdict> verdict;
  std::optional<ErrorKind> error_kind;
  std::string error;
  std::optional<std::string> raw;  // verbatim model output for malformed answers
};

/// Judges every input with at most `max_parallel` in flight. Outcomes come
/// back in input order. Aborted runs rethrow instead of being recorded.
std::vector<JudgeOutcome> judge_all(Judge& judge, std::span<const JudgeInput> inputs, std::size_t max_parallel);

}  // namespace verm
