#include "verm/corrupt/ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "verm/core/errors.hpp"
#include "verm/corrupt/catalog.hpp"

namespace verm {

namespace {

struct KindInfo {
  OpKind kind;
  std::string_view name;
  TaskKind task;
  std::string_view category;
};

constexpr std::array<KindInfo, 22> kKinds = {{
    {OpKind::SwapSeriesColors, "swap_series_colors", TaskKind::Chart, "style_error"},
    {OpKind::RecolorSeries, "recolor_series", TaskKind::Chart, "style_error"},
    {OpKind::ScaleSeries, "scale_series", TaskKind::Chart, "data_error"},
    {OpKind::PerturbPoint, "perturb_point", TaskKind::Chart, "data_error"},
    {OpKind::Retitle, "retitle", TaskKind::Chart, "text_error"},
    {OpKind::RelabelTick, "relabel_tick", TaskKind::Chart, "text_error"},
    {OpKind::ChangeChartKind, "change_chart_kind", TaskKind::Chart, "structure_error"},
    {OpKind::DropLegend, "drop_legend", TaskKind::Chart, "structure_error"},
    {OpKind::CharSwap, "char_swap", TaskKind::Table, "text_error"},
    {OpKind::DropUnit, "drop_unit", TaskKind::Table, "text_error"},
    {OpKind::DecimalComma, "decimal_comma", TaskKind::Table, "numeric_error"},
    {OpKind::DigitFlip, "digit_flip", TaskKind::Table, "numeric_error"},
    {OpKind::SwapColumns, "swap_columns", TaskKind::Table, "layout_error"},
    {OpKind::MergeCells, "merge_cells", TaskKind::Table, "layout_error"},
    {OpKind::SplitCell, "split_cell", TaskKind::Table, "layout_error"},
    {OpKind::JitterVertex, "jitter_vertex", TaskKind::Svg, "shape_error"},
    {OpKind::DropPrimitive, "drop_primitive", TaskKind::Svg, "shape_error"},
    {OpKind::StrokeWidth, "stroke_width", TaskKind::Svg, "style_error"},
    {OpKind::FillColor, "fill_color", TaskKind::Svg, "style_error"},
    {OpKind::Regroup, "regroup", TaskKind::Svg, "structure_error"},
    {OpKind::AddBorder, "add_border", TaskKind::Svg, "structure_error"},
    {OpKind::GlyphSwap, "glyph_swap", TaskKind::Svg, "text_symbol_error"},
}};

const KindInfo& info(OpKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k;
  throw DataError("unknown op kind");
}

std::string quote(std::string_view s) { return "'" + std::string(s) + "'"; }

[[noreturn]] void fail(const std::string& what) { throw DataError(what); }

Series& series_at(ChartSpec& c, int i) {
  if (i < 0 || i >= static_cast<int>(c.series.size())) fail("series " + std::to_string(i) + " does not exist");
  return c.series[i];
}

TableCell& cell_at(TableSpec& t, int row, int col) {
  TableCell* c = find_cell(t, row, col);
  if (!c) fail("no cell at row " + std::to_string(row) + " col " + std::to_string(col));
  return *c;
}

SvgPrimitive& primitive_at(SvgDoc& d, const std::string& id) {
  SvgPrimitive* p = find_primitive(d, id);
  if (!p) fail("no primitive with id " + quote(id));
  return *p;
}

char single_char(const std::string& s, const char* what) {
  if (s.size() != 1) fail(std::string(what) + " must be a single character");
  return s[0];
}

bool spans_column(const TableSpec& t, int col) {
  for (const auto& c : t.cells)
    if (c.col <= col && col < c.col + c.colspan && (c.colspan != 1 || c.rowspan != 1)) return true;
  return false;
}

std::string cell_text(const TableSpec& t, int row, int col) {
  const TableCell* c = find_cell(t, row, col);
  return c ? c->text : std::string();
}

std::pair<double, double> group_translate(const SvgDoc& d, int g) {
  for (const auto& grp : d.groups)
    if (grp.id == g) return {grp.dx, grp.dy};
  if (g == 0) return {0.0, 0.0};
  fail("group " + std::to_string(g) + " does not exist");
}

ErrorItem item(const CorruptionOp& op, std::string location, std::string description) {
  return {op.category, op.severity, std::move(location), std::move(description)};
}

ErrorItem apply_chart(ChartSpec& c, const CorruptionOp& op) {
  const OpTarget& t = op.locator;
  const OpParams& p = op.params;
  switch (op.kind) {
    case OpKind::SwapSeriesColors: {
      if (t.series == t.other) fail("swap needs two distinct series");
      Series& a = series_at(c, t.series);
      Series& b = series_at(c, t.other);
      if (a.color == b.color) fail("series colors are identical; swap has no effect");
      std::swap(a.color, b.color);
      return item(op, catalog::series_colors(t.series, t.other),
                  "colors of series " + std::to_string(std::min(t.series, t.other)) + " and " +
                      std::to_string(std::max(t.series, t.other)) + " are swapped");
    }
    case OpKind::RecolorSeries: {
      Series& s = series_at(c, t.series);
      if (!p.color) fail("recolor needs params.color");
      if (*p.color == s.color) fail("recolor to the same color has no effect");
      const std::string before = to_hex(s.color);
      s.color = *p.color;
      return item(op, catalog::series_color(t.series),
                  "series " + std::to_string(t.series) + " color changed from " + before + " to " + to_hex(s.color));
    }
    case OpKind::ScaleSeries: {
      Series& s = series_at(c, t.series);
      if (!(std::isfinite(p.factor) && p.factor > 0.0) || p.factor == 1.0)
        fail("scale factor must be positive and not 1");
      bool changes = false;
      for (auto& pt : s.points) {
        changes |= pt.y != 0.0;
        pt.y *= p.factor;
      }
      if (!changes) fail("series has only zero values; scaling has no effect");
      return item(op, catalog::series_values(t.series),
                  "series " + std::to_string(t.series) + " values scaled by " + format_number(p.factor));
    }
    case OpKind::PerturbPoint: {
      Series& s = series_at(c, t.series);
      if (t.index < 0 || t.index >= static_cast<int>(s.points.size()))
        fail("point " + std::to_string(t.index) + " does not exist");
      if (!std::isfinite(p.delta) || p.delta == 0.0) fail("perturbation delta must be non-zero");
      double& y = s.points[t.index].y;
      const double before = y;
      y += p.delta;
      return item(op, catalog::series_point(t.series, t.index),
                  "series " + std::to_string(t.series) + " point " + std::to_string(t.index) +
                      " value changed from " + format_number(before) + " to " + format_number(y));
    }
    case OpKind::Retitle: {
      if (p.text == c.title) fail("new title equals the old one");
      const std::string before = c.title;
      c.title = p.text;
      return item(op, std::string(catalog::kTitle), "title reads " + quote(c.title) + " instead of " + quote(before));
    }
    case OpKind::RelabelTick: {
      if (t.index < 0 || t.index >= static_cast<int>(c.tick_labels.size()))
        fail("tick " + std::to_string(t.index) + " does not exist");
      std::string& label = c.tick_labels[t.index];
      if (label == p.text) fail("new tick label equals the old one");
      const std::string before = label;
      label = p.text;
      return item(op, catalog::tick(t.index),
                  "x-axis tick " + std::to_string(t.index) + " reads " + quote(label) + " instead of " + quote(before));
    }
    case OpKind::ChangeChartKind: {
      Series& s = series_at(c, t.series);
      if (!p.series_kind) fail("change_chart_kind needs params.series_kind");
      if (*p.series_kind == s.kind) fail("series already has that kind");
      const SeriesKind before = s.kind;
      s.kind = *p.series_kind;
      return item(op, catalog::series_type(t.series),
                  "series " + std::to_string(t.series) + " drawn as " + std::string(to_string(s.kind)) +
                      " instead of " + std::string(to_string(before)));
    }
    case OpKind::DropLegend: {
      if (!c.legend || c.series.empty()) fail("chart shows no legend to drop");
      c.legend = false;
      return item(op, std::string(catalog::kLegend), "legend is missing");
    }
    default: break;
  }
  fail("op kind " + std::string(to_string(op.kind)) + " does not apply to charts");
}

ErrorItem apply_table(TableSpec& tb, const CorruptionOp& op) {
  const OpTarget& t = op.locator;
  const OpParams& p = op.params;
  const std::string where = catalog::cell(t.row, t.col);
  switch (op.kind) {
    case OpKind::CharSwap:
    case OpKind::DigitFlip: {
      TableCell& c = cell_at(tb, t.row, t.col);
      const char from = single_char(p.from, "params.from");
      const char to = single_char(p.to, "params.to");
      if (from == to) fail("from and to are the same character");
      const bool digits = catalog::is_digit(from) && catalog::is_digit(to);
      if (op.kind == OpKind::DigitFlip && !digits) fail("digit_flip needs two digits");
      if (op.kind == OpKind::CharSwap && (digits || (from == '.' && to == ',')))
        fail("char_swap between digits or '.'->',' is a numeric operator");
      const auto pos = c.text.find(from);
      if (pos == std::string::npos) fail("cell text has no " + quote(p.from));
      c.text[pos] = to;
      if (op.kind == OpKind::DigitFlip)
        return item(op, where, "digit " + quote(p.from) + " rendered as " + quote(p.to));
      return item(op, where, "character " + quote(p.from) + " rendered as " + quote(p.to));
    }
    case OpKind::DropUnit: {
      TableCell& c = cell_at(tb, t.row, t.col);
      auto parts = catalog::split_unit(c.text);
      if (!parts) fail("cell text has no unit suffix");
      c.text = parts->first;
      auto unit = parts->second;
      if (!unit.empty() && unit.front() == ' ') unit.erase(0, 1);
      return item(op, where, "unit " + quote(unit) + " missing");
    }
    case OpKind::DecimalComma: {
      TableCell& c = cell_at(tb, t.row, t.col);
      const auto pos = c.text.find('.');
      if (pos == std::string::npos) fail("cell text has no decimal point");
      c.text[pos] = ',';
      return item(op, where, "decimal point rendered as comma");
    }
    case OpKind::SwapColumns: {
      const int a = t.col, b = t.other;
      if (a == b || a < 0 || b < 0 || a >= tb.cols || b >= tb.cols) fail("swap needs two distinct columns in range");
      if (spans_column(tb, a) || spans_column(tb, b)) fail("cannot swap columns that contain spanning cells");
      bool differs = column_align(tb, a) != column_align(tb, b);
      for (int r = 0; r < tb.rows && !differs; ++r) differs = cell_text(tb, r, a) != cell_text(tb, r, b);
      if (!differs) fail("columns are identical; swap has no effect");
      for (auto& c : tb.cells) {
        if (c.col == a) c.col = b;
        else if (c.col == b) c.col = a;
      }
      if (!tb.align.empty()) std::swap(tb.align[a], tb.align[b]);
      return item(op, catalog::columns(a, b),
                  "columns " + std::to_string(std::min(a, b)) + " and " + std::to_string(std::max(a, b)) + " are swapped");
    }
    case OpKind::MergeCells: {
      TableCell& left = cell_at(tb, t.row, t.col);
      TableCell* right = find_cell(tb, t.row, t.col + 1);
      if (!right) fail("no cell to the right of row " + std::to_string(t.row) + " col " + std::to_string(t.col));
      if (left.rowspan != 1 || left.colspan != 1 || right->rowspan != 1 || right->colspan != 1)
        fail("merge needs two single cells");
      const TableCell removed = *right;
      std::erase(tb.cells, removed);
      cell_at(tb, t.row, t.col).colspan = 2;
      return item(op, where,
                  "cells at col " + std::to_string(t.col) + " and " + std::to_string(t.col + 1) + " merged");
    }
    case OpKind::SplitCell: {
      TableCell& c = cell_at(tb, t.row, t.col);
      if (c.rowspan == 1 && c.colspan == 1) fail("cell does not span; nothing to split");
      const int rs = c.rowspan, cs = c.colspan;
      c.rowspan = c.colspan = 1;
      for (int r = t.row; r < t.row + rs; ++r)
        for (int k = t.col; k < t.col + cs; ++k)
          if (r != t.row || k != t.col) tb.cells.push_back({r, k, 1, 1, ""});
      return item(op, where, "spanning cell split into single cells");
    }
    default: break;
  }
  fail("op kind " + std::string(to_string(op.kind)) + " does not apply to tables");
}

ErrorItem apply_svg(SvgDoc& d, const CorruptionOp& op) {
  const OpTarget& t = op.locator;
  const OpParams& p = op.params;
  switch (op.kind) {
    case OpKind::JitterVertex: {
      SvgPrimitive& prim = primitive_at(d, t.id);
      if (!std::isfinite(p.dx) || !std::isfinite(p.dy) || (p.dx == 0.0 && p.dy == 0.0))
        fail("jitter needs a non-zero finite offset");
      if (prim.kind == PrimitiveKind::Line || prim.kind == PrimitiveKind::Polyline) {
        if (t.index < 0 || t.index >= static_cast<int>(prim.points.size()))
          fail("vertex " + std::to_string(t.index) + " does not exist");
        prim.points[t.index].x += p.dx;
        prim.points[t.index].y += p.dy;
      } else {
        if (t.index > 0) fail("only vertex 0 exists on this primitive");
        prim.x += p.dx;
        prim.y += p.dy;
      }
      return item(op, catalog::primitive(t.id),
                  "primitive " + t.id + " displaced by (" + format_number(p.dx) + ", " + format_number(p.dy) + ")");
    }
    case OpKind::DropPrimitive: {
      primitive_at(d, t.id);
      std::erase_if(d.primitives, [&](const SvgPrimitive& q) { return q.id == t.id; });
      return item(op, catalog::primitive(t.id), "primitive " + t.id + " is missing");
    }
    case OpKind::StrokeWidth: {
      SvgPrimitive& prim = primitive_at(d, t.id);
      if (prim.kind == PrimitiveKind::Text || !prim.stroke) fail("primitive has no stroke");
      if (!(p.width >= 0.0) || p.width == prim.stroke_width) fail("stroke width unchanged");
      const double before = prim.stroke_width;
      prim.stroke_width = p.width;
      return item(op, catalog::primitive(t.id),
                  "stroke width " + format_number(p.width) + " instead of " + format_number(before));
    }
    case OpKind::FillColor: {
      SvgPrimitive& prim = primitive_at(d, t.id);
      if (prim.kind == PrimitiveKind::Line || prim.kind == PrimitiveKind::Polyline) fail("lines have no fill");
      if (!p.color) fail("fill_color needs params.color");
      if (prim.fill == p.color) fail("fill unchanged");
      prim.fill = p.color;
      return item(op, catalog::primitive(t.id), "fill color " + to_hex(*p.color));
    }
    case OpKind::Regroup: {
      SvgPrimitive& prim = primitive_at(d, t.id);
      if (p.group == prim.group) fail("primitive is already in that group");
      if (group_translate(d, p.group) == group_translate(d, prim.group))
        fail("target group has the same translation; regroup has no effect");
      prim.group = p.group;
      return item(op, catalog::primitive(t.id), "primitive " + t.id + " placed in group " + std::to_string(p.group));
    }
    case OpKind::AddBorder: {
      if (find_primitive(d, catalog::kBorderId)) fail("document already has a border primitive");
      SvgPrimitive border;
      border.kind = PrimitiveKind::Rect;
      border.id = std::string(catalog::kBorderId);
      border.width = d.width;
      border.height = d.height;
      border.stroke = p.color.value_or(Rgb{32, 32, 32});
      border.stroke_width = p.width > 0.0 ? p.width : 3.0;
      d.primitives.push_back(border);
      return item(op, std::string(catalog::kBorder), "extraneous border drawn around the canvas");
    }
    case OpKind::GlyphSwap: {
      SvgPrimitive& prim = primitive_at(d, t.id);
      if (prim.kind != PrimitiveKind::Text) fail("glyph_swap needs a text primitive");
      if (t.index < 0 || t.index >= static_cast<int>(prim.text.size()))
        fail("character " + std::to_string(t.index) + " does not exist");
      const char to = single_char(p.to, "params.to");
      const char from = prim.text[t.index];
      if (from == to) fail("glyph unchanged");
      prim.text[t.index] = to;
      return item(op, catalog::primitive(t.id),
                  "glyph " + quote(std::string(1, from)) + " rendered as " + quote(std::string(1, to)));
    }
    default: break;
  }
  fail("op kind " + std::string(to_string(op.kind)) + " does not apply to svg");
}

Json target_json(const OpTarget& t) {
  Json j = Json::object();
  if (t.series >= 0) j["series"] = t.series;
  if (t.other >= 0) j["other"] = t.other;
  if (t.index >= 0) j["index"] = t.index;
  if (t.row >= 0) j["row"] = t.row;
  if (t.col >= 0) j["col"] = t.col;
  if (!t.id.empty()) j["id"] = t.id;
  return j;
}

Json params_json(const OpParams& p) {
  const OpParams d;
  Json j = Json::object();
  if (p.factor != d.factor) j["factor"] = p.factor;
  if (p.delta != d.delta) j["delta"] = p.delta;
  if (p.dx != d.dx) j["dx"] = p.dx;
  if (p.dy != d.dy) j["dy"] = p.dy;
  if (p.width != d.width) j["width"] = p.width;
  if (p.color) j["color"] = to_hex(*p.color);
  if (!p.text.empty()) j["text"] = p.text;
  if (!p.from.empty()) j["from"] = p.from;
  if (!p.to.empty()) j["to"] = p.to;
  if (p.series_kind) j["series_kind"] = std::string(to_string(*p.series_kind));
  if (p.group != d.group) j["group"] = p.group;
  return j;
}

template <typename T>
T value_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw DataError(std::string("op: field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string_view to_string(OpKind kind) { return info(kind).name; }

OpKind op_kind_from_string(std::string_view text) {
  for (const auto& k : kKinds)
    if (k.name == text) return k.kind;
  throw DataError("unknown op kind '" + std::string(text) + "'");
}

TaskKind op_task(OpKind kind) { return info(kind).task; }
std::string_view op_category(OpKind kind) { return info(kind).category; }

namespace {

SeverityLevel catalog_severity(const StructuredDoc& doc, const CorruptionOp& op) {
  switch (op.kind) {
    case OpKind::SwapSeriesColors: return SeverityLevel::Moderate;
    case OpKind::RecolorSeries: return SeverityLevel::Minor;
    case OpKind::ScaleSeries: return catalog::grade_scale(op.params.factor);
    case OpKind::PerturbPoint: {
      const auto& c = doc.chart();
      const int s = op.locator.series, i = op.locator.index;
      if (s < 0 || s >= static_cast<int>(c.series.size()) || i < 0 ||
          i >= static_cast<int>(c.series[s].points.size()))
        return SeverityLevel::Moderate;  // apply_op will reject the locator
      const double y = c.series[s].points[i].y;
      return catalog::grade_value_change(y, y + op.params.delta);
    }
    case OpKind::Retitle: return SeverityLevel::Moderate;
    case OpKind::RelabelTick: return SeverityLevel::Minor;
    case OpKind::ChangeChartKind: return SeverityLevel::Critical;
    case OpKind::DropLegend: return SeverityLevel::Moderate;
    case OpKind::CharSwap: return SeverityLevel::Minor;
    case OpKind::DropUnit: return SeverityLevel::Moderate;
    case OpKind::DecimalComma: return SeverityLevel::Moderate;
    case OpKind::DigitFlip: return SeverityLevel::Critical;
    case OpKind::SwapColumns: return SeverityLevel::Critical;
    case OpKind::MergeCells: return SeverityLevel::Moderate;
    case OpKind::SplitCell: return SeverityLevel::Moderate;
    case OpKind::JitterVertex:
      return catalog::grade_displacement(std::max(std::fabs(op.params.dx), std::fabs(op.params.dy)));
    case OpKind::DropPrimitive: return SeverityLevel::Critical;
    case OpKind::StrokeWidth: return SeverityLevel::Minor;
    case OpKind::FillColor: return SeverityLevel::Moderate;
    case OpKind::Regroup: return SeverityLevel::Moderate;
    case OpKind::AddBorder: return SeverityLevel::Minor;
    case OpKind::GlyphSwap: return SeverityLevel::Moderate;
  }
  return SeverityLevel::Moderate;
}

}  // namespace

CorruptionOp catalog_op(const StructuredDoc& doc, OpKind kind, OpTarget target, OpParams params) {
  CorruptionOp op;
  op.task = op_task(kind);
  op.category = std::string(op_category(kind));
  op.kind = kind;
  op.locator = std::move(target);
  op.params = std::move(params);
  op.severity = op.task == doc.task ? catalog_severity(doc, op) : SeverityLevel::Moderate;
  return op;
}

ErrorItem apply_op(StructuredDoc& doc, const CorruptionOp& op) {
  if (op.task != doc.task || op_task(op.kind) != doc.task)
    throw DataError("op " + std::string(to_string(op.kind)) + " targets " + std::string(to_string(op.task)) +
                    " but the document is " + std::string(to_string(doc.task)));
  if (op.category != op_category(op.kind))
    throw DataError("category '" + op.category + "' does not match op kind " + std::string(to_string(op.kind)) +
                    " (expected " + std::string(op_category(op.kind)) + ")");
  switch (doc.task) {
    case TaskKind::Chart: return apply_chart(doc.chart(), op);
    case TaskKind::Table: return apply_table(doc.table(), op);
    case TaskKind::Svg: return apply_svg(doc.svg(), op);
  }
  throw DataError("unknown task");
}

std::string_view to_string(Provenance p) { return p == Provenance::Edit ? "edit" : "infer"; }

Provenance provenance_from_string(std::string_view text) {
  if (text == "edit") return Provenance::Edit;
  if (text == "infer") return Provenance::Infer;
  throw DataError("unknown provenance '" + std::string(text) + "'");
}

PairInstance apply_edits(const StructuredDoc& doc, std::span<const CorruptionOp> ops) {
  PairInstance out;
  out.task = doc.task;
  out.gt_doc = doc;
  out.pred_doc = doc;
  std::vector<ErrorItem> items;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    try {
      items.push_back(apply_op(out.pred_doc, ops[i]));
    } catch (const DataError& e) {
      throw DataError("op " + std::to_string(i) + " (" + std::string(to_string(ops[i].kind)) + "): " + e.what());
    }
  }
  out.gt_report = DiscrepancyReport::from_errors(doc.task, std::move(items));
  out.ops.assign(ops.begin(), ops.end());
  return out;
}

Json to_json(const CorruptionOp& op) {
  return Json{{"task", std::string(to_string(op.task))},
              {"kind", std::string(to_string(op.kind))},
              {"category", op.category},
              {"severity", std::string(to_string(op.severity))},
              {"locator", target_json(op.locator)},
              {"params", params_json(op.params)}};
}

CorruptionOp op_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("op: expected an object");
  CorruptionOp op;
  op.kind = op_kind_from_string(value_or<std::string>(j, "kind", ""));
  op.task = op_task(op.kind);
  if (j.contains("task") && task_from_string(value_or<std::string>(j, "task", "")) != op.task)
    throw DataError("op: task does not match kind " + std::string(to_string(op.kind)));
  op.category = value_or<std::string>(j, "category", std::string(op_category(op.kind)));
  const std::string sev = value_or<std::string>(j, "severity", "");
  auto level = parse_severity(sev);
  if (!level) throw DataError("op: missing or unknown severity '" + sev + "'");
  op.severity = *level;
  const Json loc = j.value("locator", Json::object());
  op.locator.series = value_or<int>(loc, "series", -1);
  op.locator.other = value_or<int>(loc, "other", -1);
  op.locator.index = value_or<int>(loc, "index", -1);
  op.locator.row = value_or<int>(loc, "row", -1);
  op.locator.col = value_or<int>(loc, "col", -1);
  op.locator.id = value_or<std::string>(loc, "id", "");
  const Json par = j.value("params", Json::object());
  OpParams& p = op.params;
  p.factor = value_or<double>(par, "factor", 1.0);
  p.delta = value_or<double>(par, "delta", 0.0);
  p.dx = value_or<double>(par, "dx", 0.0);
  p.dy = value_or<double>(par, "dy", 0.0);
  p.width = value_or<double>(par, "width", 0.0);
  if (par.contains("color")) p.color = rgb_from_hex(value_or<std::string>(par, "color", ""));
  p.text = value_or<std::string>(par, "text", "");
  p.from = value_or<std::string>(par, "from", "");
  p.to = value_or<std::string>(par, "to", "");
  if (par.contains("series_kind")) p.series_kind = series_kind_from_string(value_or<std::string>(par, "series_kind", ""));
  p.group = value_or<int>(par, "group", 0);
  return op;
}

std::vector<CorruptionOp> plan_from_json(const Json& j) {
  const Json& list = j.is_object() && j.contains("ops") ? j.at("ops") : j;
  if (!list.is_array()) throw DataError("plan: expected an array of ops");
  std::vector<CorruptionOp> ops;
  for (const auto& o : list) ops.push_back(op_from_json(o));
  return ops;
}

Json to_json(const PairInstance& p) {
  Json ops = Json::array();
  for (const auto& op : p.ops) ops.push_back(to_json(op));
  return Json{{"id", p.id},
              {"task", std::string(to_string(p.task))},
              {"gt_doc", to_json(p.gt_doc)},
              {"pred_doc", to_json(p.pred_doc)},
              {"gt_report", to_json(p.gt_report)},
              {"seed", p.seed},
              {"provenance", std::string(to_string(p.provenance))},
              {"ops", ops}};
}

PairInstance pair_from_json(const Json& j) {
  PairInstance p;
  p.id = j.value("id", "");
  p.task = task_from_string(j.value("task", ""));
  p.gt_doc = doc_from_json(j.at("gt_doc"));
  p.pred_doc = doc_from_json(j.at("pred_doc"));
  p.gt_report = report_from_json(j.at("gt_report"));
  p.seed = j.value("seed", std::uint64_t{0});
  p.provenance = provenance_from_string(j.value("provenance", "edit"));
  for (const auto& o : j.value("ops", Json::array())) p.ops.push_back(op_from_json(o));
  return p;
}

}  // namespace verm
