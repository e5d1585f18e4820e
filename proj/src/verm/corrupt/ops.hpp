#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verm/core/doc.hpp"
#include "verm/core/report.hpp"

namespace verm {

enum class OpKind {
  // chart
  SwapSeriesColors,
  RecolorSeries,
  ScaleSeries,
  PerturbPoint,
  Retitle,
  RelabelTick,
  ChangeChartKind,
  DropLegend,
  // table
  CharSwap,
  DropUnit,
  DecimalComma,
  DigitFlip,
  SwapColumns,
  MergeCells,
  SplitCell,
  // svg
  JitterVertex,
  DropPrimitive,
  StrokeWidth,
  FillColor,
  Regroup,
  AddBorder,
  GlyphSwap,
};

std::string_view to_string(OpKind kind);
OpKind op_kind_from_string(std::string_view text);
TaskKind op_task(OpKind kind);
std::string_view op_category(OpKind kind);

/// Which element an operator targets. Unused fields stay at their defaults.
struct OpTarget {
  int series = -1;
  int other = -1;  // second series or column for swaps
  int index = -1;  // point, tick, vertex or character index
  int row = -1;
  int col = -1;
  std::string id;  // svg primitive id
  bool operator==(const OpTarget&) const = default;
};

struct OpParams {
  double factor = 1.0;
  double delta = 0.0;
  double dx = 0.0, dy = 0.0;
  double width = 0.0;
  std::optional<Rgb> color;
  std::string text;
  std::string from, to;
  std::optional<SeriesKind> series_kind;
  int group = 0;
  bool operator==(const OpParams&) const = default;
};

struct CorruptionOp {
  TaskKind task = TaskKind::Chart;
  std::string category;
  SeverityLevel severity = SeverityLevel::Minor;
  OpKind kind = OpKind::Retitle;
  OpTarget locator;
  OpParams params;
  bool operator==(const CorruptionOp&) const = default;
};

/// Builds an op with the catalog category and the catalog severity for
/// its magnitude, graded against `doc` (the state the op will apply to).
CorruptionOp catalog_op(const StructuredDoc& doc, OpKind kind, OpTarget target, OpParams params = {});

/// Applies one op in place and returns the templated annotation for it.
/// Throws DataError when the locator does not resolve or the op would not
/// change the document.
ErrorItem apply_op(StructuredDoc& doc, const CorruptionOp& op);

enum class Provenance { Edit, Infer };
std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view text);

/// One reward-data element: a ground-truth doc, its corrupted counterpart
/// and the discrepancy annotation describing the injected errors.
struct PairInstance {
  std::string id;
  TaskKind task = TaskKind::Chart;
  StructuredDoc gt_doc;
  StructuredDoc pred_doc;
  DiscrepancyReport gt_report;
  std::uint64_t seed = 0;
  Provenance provenance = Provenance::Edit;
  std::vector<CorruptionOp> ops;
  bool operator==(const PairInstance&) const = default;
};

/// Applies ops left to right; errors name the failing op index.
PairInstance apply_edits(const StructuredDoc& doc, std::span<const CorruptionOp> ops);

Json to_json(const CorruptionOp& op);
CorruptionOp op_from_json(const Json& j);
/// Accepts either an array of ops or {"ops": [...]}.
std::vector<CorruptionOp> plan_from_json(const Json& j);

Json to_json(const PairInstance& p);
PairInstance pair_from_json(const Json& j);

}  // namespace verm
