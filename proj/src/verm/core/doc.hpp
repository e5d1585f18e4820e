#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "verm/core/report.hpp"

namespace verm {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// "#rrggbb"
std::string to_hex(Rgb c);
Rgb rgb_from_hex(std::string_view hex);

// ---- charts ---------------------------------------------------------------

enum class SeriesKind { Bar, Line, Scatter };

std::string_view to_string(SeriesKind kind);
SeriesKind series_kind_from_string(std::string_view text);

struct Point {
  double x = 0.0, y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Series {
  SeriesKind kind = SeriesKind::Bar;
  std::string label;
  Rgb color;
  std::vector<Point> points;
  bool operator==(const Series&) const = default;
};

struct AxisRange {
  double min = 0.0, max = 1.0;
  bool operator==(const AxisRange&) const = default;
};

struct ChartSpec {
  int width = 640;
  int height = 480;
  std::string title;
  bool legend = true;
  std::vector<std::string> tick_labels;  // label i sits at x = i
  std::optional<AxisRange> x_range;
  std::optional<AxisRange> y_range;      // auto: [0, 1.05 * max|y|]
  std::vector<Series> series;
  bool operator==(const ChartSpec&) const = default;
};

// ---- tables ---------------------------------------------------------------

enum class Align { Left, Center, Right };

std::string_view to_string(Align a);
Align align_from_string(std::string_view text);

struct TableCell {
  int row = 0, col = 0;
  int rowspan = 1, colspan = 1;
  std::string text;
  bool operator==(const TableCell&) const = default;
};

struct TableSpec {
  int rows = 0, cols = 0;
  std::vector<TableCell> cells;
  std::vector<Align> align;  // per column; empty means all left
  bool operator==(const TableSpec&) const = default;
};

// ---- svg ------------------------------------------------------------------

enum class PrimitiveKind { Rect, Circle, Line, Polyline, Text };

std::string_view to_string(PrimitiveKind kind);
PrimitiveKind primitive_kind_from_string(std::string_view text);

/// One drawable. Which geometry fields are meaningful depends on kind:
/// rect (x, y, width, height), circle (x, y centre, r), line/polyline
/// (points), text (x, y top-left, text, size).
struct SvgPrimitive {
  PrimitiveKind kind = PrimitiveKind::Rect;
  std::string id;
  int group = 0;
  double x = 0.0, y = 0.0, width = 0.0, height = 0.0, r = 0.0;
  std::vector<Point> points;
  std::string text;
  int size = 1;
  std::optional<Rgb> fill;
  std::optional<Rgb> stroke;
  double stroke_width = 0.0;
  double opacity = 1.0;
  bool operator==(const SvgPrimitive&) const = default;
};

/// Translate-only grouping; group 0 is the implicit untranslated root.
struct SvgGroup {
  int id = 0;
  double dx = 0.0, dy = 0.0;
  bool operator==(const SvgGroup&) const = default;
};

struct SvgDoc {
  int width = 0, height = 0;
  Rgb background{255, 255, 255};
  std::vector<SvgGroup> groups;
  std::vector<SvgPrimitive> primitives;
  bool operator==(const SvgDoc&) const = default;
};

// ---- the textual artifact -------------------------------------------------

struct StructuredDoc {
  TaskKind task = TaskKind::Chart;
  std::variant<ChartSpec, TableSpec, SvgDoc> body;
  std::optional<std::string> raw_code;  // opaque, for plugin rendering

  const ChartSpec& chart() const { return std::get<ChartSpec>(body); }
  const TableSpec& table() const { return std::get<TableSpec>(body); }
  const SvgDoc& svg() const { return std::get<SvgDoc>(body); }
  ChartSpec& chart() { return std::get<ChartSpec>(body); }
  TableSpec& table() { return std::get<TableSpec>(body); }
  SvgDoc& svg() { return std::get<SvgDoc>(body); }

  static StructuredDoc make(ChartSpec c) { return {TaskKind::Chart, std::move(c), std::nullopt}; }
  static StructuredDoc make(TableSpec t) { return {TaskKind::Table, std::move(t), std::nullopt}; }
  static StructuredDoc make(SvgDoc s) { return {TaskKind::Svg, std::move(s), std::nullopt}; }

  bool operator==(const StructuredDoc&) const = default;
};

Json to_json(const StructuredDoc& doc);
/// Structural parse (types and enumerations). Throws DataError.
StructuredDoc doc_from_json(const Json& j);

std::string canonical_serialize(const StructuredDoc& doc);
StructuredDoc parse_doc(std::string_view text);

/// Semantic checks shared by the renderers: canvas sizes, spans, opacity.
/// Empty when the document can be rasterized.
std::vector<std::string> doc_violations(const StructuredDoc& doc);

/// Table helpers.
const TableCell* find_cell(const TableSpec& t, int row, int col);
TableCell* find_cell(TableSpec& t, int row, int col);
Align column_align(const TableSpec& t, int col);

/// SVG helpers.
const SvgPrimitive* find_primitive(const SvgDoc& d, std::string_view id);
SvgPrimitive* find_primitive(SvgDoc& d, std::string_view id);

}  // namespace verm
