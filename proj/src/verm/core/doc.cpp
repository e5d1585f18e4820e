#include "verm/core/doc.hpp"

#include <cmath>
#include <set>

#include "verm/core/errors.hpp"

namespace verm {

namespace {

constexpr int kMaxCanvas = 8192;
constexpr int kMaxTableCells = 100000;

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw DataError(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T get_as(const Json& v, const char* key, const char* what) {
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw DataError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T req(const Json& j, const char* key, const char* what) {
  return get_as<T>(field(j, key, what), key, what);
}

template <typename T>
T opt(const Json& j, const char* key, T fallback, const char* what) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return get_as<T>(*it, key, what);
}

Json point_json(const Point& p) { return Json::array({p.x, p.y}); }

Point point_from(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw DataError(std::string(what) + ": points must be [x, y] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point> points_from(const Json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string(what) + ": 'points' must be an array");
  std::vector<Point> pts;
  for (const auto& p : j) pts.push_back(point_from(p, what));
  return pts;
}

Json range_json(const std::optional<AxisRange>& r) {
  if (!r) return nullptr;
  return Json::array({r->min, r->max});
}

std::optional<AxisRange> range_from(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  const Point p = point_from(*it, key);
  return AxisRange{p.x, p.y};
}

Json chart_json(const ChartSpec& c) {
  Json series = Json::array();
  for (const auto& s : c.series) {
    Json pts = Json::array();
    for (const auto& p : s.points) pts.push_back(point_json(p));
    series.push_back({{"kind", std::string(to_string(s.kind))},
                      {"label", s.label},
                      {"color", to_hex(s.color)},
                      {"points", pts}});
  }
  return Json{{"width", c.width},         {"height", c.height},
              {"title", c.title},         {"legend", c.legend},
              {"tick_labels", c.tick_labels}, {"x_range", range_json(c.x_range)},
              {"y_range", range_json(c.y_range)}, {"series", series}};
}

ChartSpec chart_from(const Json& j) {
  constexpr const char* what = "chart";
  ChartSpec c;
  c.width = opt<int>(j, "width", 640, what);
  c.height = opt<int>(j, "height", 480, what);
  c.title = opt<std::string>(j, "title", "", what);
  c.legend = opt<bool>(j, "legend", true, what);
  c.tick_labels = opt<std::vector<std::string>>(j, "tick_labels", {}, what);
  c.x_range = range_from(j, "x_range");
  c.y_range = range_from(j, "y_range");
  for (const auto& s : field(j, "series", what)) {
    Series out;
    out.kind = series_kind_from_string(req<std::string>(s, "kind", "series"));
    out.label = opt<std::string>(s, "label", "", "series");
    out.color = rgb_from_hex(req<std::string>(s, "color", "series"));
    out.points = points_from(field(s, "points", "series"), "series");
    c.series.push_back(std::move(out));
  }
  return c;
}

Json table_json(const TableSpec& t) {
  Json cells = Json::array();
  for (const auto& c : t.cells)
    cells.push_back({{"row", c.row},
                     {"col", c.col},
                     {"rowspan", c.rowspan},
                     {"colspan", c.colspan},
                     {"text", c.text}});
  Json align = Json::array();
  for (auto a : t.align) align.push_back(std::string(to_string(a)));
  return Json{{"rows", t.rows}, {"cols", t.cols}, {"cells", cells}, {"align", align}};
}

TableSpec table_from(const Json& j) {
  constexpr const char* what = "table";
  TableSpec t;
  t.rows = req<int>(j, "rows", what);
  t.cols = req<int>(j, "cols", what);
  for (const auto& c : field(j, "cells", what)) {
    TableCell cell;
    cell.row = req<int>(c, "row", "cell");
    cell.col = req<int>(c, "col", "cell");
    cell.rowspan = opt<int>(c, "rowspan", 1, "cell");
    cell.colspan = opt<int>(c, "colspan", 1, "cell");
    cell.text = opt<std::string>(c, "text", "", "cell");
    t.cells.push_back(std::move(cell));
  }
  for (const auto& a : opt<std::vector<std::string>>(j, "align", {}, what))
    t.align.push_back(align_from_string(a));
  return t;
}

Json primitive_json(const SvgPrimitive& p) {
  Json j{{"kind", std::string(to_string(p.kind))},
         {"id", p.id},
         {"group", p.group},
         {"opacity", p.opacity},
         {"stroke_width", p.stroke_width},
         {"fill", p.fill ? Json(to_hex(*p.fill)) : Json(nullptr)},
         {"stroke", p.stroke ? Json(to_hex(*p.stroke)) : Json(nullptr)}};
  switch (p.kind) {
    case PrimitiveKind::Rect:
      j["x"] = p.x, j["y"] = p.y, j["width"] = p.width, j["height"] = p.height;
      break;
    case PrimitiveKind::Circle:
      j["x"] = p.x, j["y"] = p.y, j["r"] = p.r;
      break;
    case PrimitiveKind::Line:
    case PrimitiveKind::Polyline: {
      Json pts = Json::array();
      for (const auto& pt : p.points) pts.push_back(point_json(pt));
      j["points"] = pts;
      break;
    }
    case PrimitiveKind::Text:
      j["x"] = p.x, j["y"] = p.y, j["text"] = p.text, j["size"] = p.size;
      break;
  }
  return j;
}

std::optional<Rgb> color_opt(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DataError(std::string("primitive: '") + key + "' must be a hex color");
  return rgb_from_hex(it->get<std::string>());
}

SvgPrimitive primitive_from(const Json& j) {
  constexpr const char* what = "primitive";
  SvgPrimitive p;
  p.kind = primitive_kind_from_string(req<std::string>(j, "kind", what));
  p.id = req<std::string>(j, "id", what);
  p.group = opt<int>(j, "group", 0, what);
  p.opacity = opt<double>(j, "opacity", 1.0, what);
  p.stroke_width = opt<double>(j, "stroke_width", 0.0, what);
  p.fill = color_opt(j, "fill");
  p.stroke = color_opt(j, "stroke");
  switch (p.kind) {
    case PrimitiveKind::Rect:
      p.x = req<double>(j, "x", what), p.y = req<double>(j, "y", what);
      p.width = req<double>(j, "width", what), p.height = req<double>(j, "height", what);
      break;
    case PrimitiveKind::Circle:
      p.x = req<double>(j, "x", what), p.y = req<double>(j, "y", what);
      p.r = req<double>(j, "r", what);
      break;
    case PrimitiveKind::Line:
    case PrimitiveKind::Polyline:
      p.points = points_from(field(j, "points", what), what);
      break;
    case PrimitiveKind::Text:
      p.x = req<double>(j, "x", what), p.y = req<double>(j, "y", what);
      p.text = req<std::string>(j, "text", what);
      p.size = opt<int>(j, "size", 1, what);
      break;
  }
  return p;
}

Json svg_json(const SvgDoc& d) {
  Json groups = Json::array();
  for (const auto& g : d.groups) groups.push_back({{"id", g.id}, {"dx", g.dx}, {"dy", g.dy}});
  Json prims = Json::array();
  for (const auto& p : d.primitives) prims.push_back(primitive_json(p));
  return Json{{"width", d.width},
              {"height", d.height},
              {"background", to_hex(d.background)},
              {"groups", groups},
              {"primitives", prims}};
}

SvgDoc svg_from(const Json& j) {
  constexpr const char* what = "svg";
  SvgDoc d;
  d.width = req<int>(j, "width", what);
  d.height = req<int>(j, "height", what);
  d.background = rgb_from_hex(opt<std::string>(j, "background", "#ffffff", what));
  if (auto it = j.find("groups"); it != j.end())
    for (const auto& g : *it)
      d.groups.push_back({req<int>(g, "id", "group"), opt<double>(g, "dx", 0.0, "group"),
                          opt<double>(g, "dy", 0.0, "group")});
  for (const auto& p : field(j, "primitives", what)) d.primitives.push_back(primitive_from(p));
  return d;
}

bool finite(double v) { return std::isfinite(v); }

void chart_violations(const ChartSpec& c, std::vector<std::string>& out) {
  if (c.width <= 0 || c.height <= 0) out.push_back("canvas: width and height must be positive");
  if (c.width > kMaxCanvas || c.height > kMaxCanvas) out.push_back("canvas: exceeds 8192 px");
  for (const auto* r : {&c.x_range, &c.y_range})
    if (*r && !((*r)->min < (*r)->max && finite((*r)->min) && finite((*r)->max)))
      out.push_back("axis range: min must be below max");
  for (std::size_t i = 0; i < c.series.size(); ++i) {
    for (const auto& p : c.series[i].points)
      if (!finite(p.x) || !finite(p.y)) {
        out.push_back("series " + std::to_string(i) + ": non-finite point");
        break;
      }
  }
}

void table_violations(const TableSpec& t, std::vector<std::string>& out) {
  if (t.rows < 1 || t.cols < 1) {
    out.push_back("grid: rows and cols must be at least 1");
    return;
  }
  if (static_cast<long long>(t.rows) * t.cols > kMaxTableCells) {
    out.push_back("grid: too many cells");
    return;
  }
  if (!t.align.empty() && static_cast<int>(t.align.size()) != t.cols)
    out.push_back("align: one entry per column required");
  std::vector<int> owner(static_cast<std::size_t>(t.rows) * t.cols, -1);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const TableCell& c = t.cells[i];
    const std::string at = "cell (" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
    if (c.row < 0 || c.row >= t.rows || c.col < 0 || c.col >= t.cols) {
      out.push_back(at + ": origin outside the grid");
      continue;
    }
    if (c.rowspan < 1) out.push_back(at + ": rowspan must be at least 1");
    if (c.colspan < 1) out.push_back(at + ": colspan must be at least 1");
    if (c.row + c.rowspan > t.rows) out.push_back(at + ": rowspan exceeds the grid");
    if (c.col + c.colspan > t.cols) out.push_back(at + ": colspan exceeds the grid");
    if (c.rowspan < 1 || c.colspan < 1 || c.row + c.rowspan > t.rows || c.col + c.colspan > t.cols)
      continue;
    for (int r = c.row; r < c.row + c.rowspan; ++r)
      for (int k = c.col; k < c.col + c.colspan; ++k) {
        int& o = owner[static_cast<std::size_t>(r) * t.cols + k];
        if (o >= 0)
          out.push_back(at + ": overlaps another cell at row " + std::to_string(r) + " col " +
                        std::to_string(k));
        o = static_cast<int>(i);
      }
  }
}

void svg_violations(const SvgDoc& d, std::vector<std::string>& out) {
  if (d.width <= 0 || d.height <= 0) out.push_back("canvas: width and height must be positive");
  if (d.width > kMaxCanvas || d.height > kMaxCanvas) out.push_back("canvas: exceeds 8192 px");
  std::set<int> groups{0};
  for (const auto& g : d.groups) {
    if (!groups.insert(g.id).second && g.id != 0)
      out.push_back("group " + std::to_string(g.id) + ": duplicate id");
    if (!finite(g.dx) || !finite(g.dy)) out.push_back("group " + std::to_string(g.id) + ": bad translate");
  }
  std::set<std::string> ids;
  for (const auto& p : d.primitives) {
    const std::string at = "primitive '" + p.id + "'";
    if (p.id.empty()) out.push_back("primitive: empty id");
    else if (!ids.insert(p.id).second) out.push_back(at + ": duplicate id");
    if (!groups.count(p.group)) out.push_back(at + ": unknown group " + std::to_string(p.group));
    if (!(p.opacity >= 0.0 && p.opacity <= 1.0)) out.push_back(at + ": opacity outside [0,1]");
    if (!(p.stroke_width >= 0.0 && p.stroke_width <= 256.0))
      out.push_back(at + ": stroke width outside [0,256]");
    for (double v : {p.x, p.y, p.width, p.height, p.r})
      if (!finite(v)) out.push_back(at + ": non-finite geometry");
    switch (p.kind) {
      case PrimitiveKind::Rect:
        if (p.width < 0 || p.height < 0) out.push_back(at + ": negative size");
        break;
      case PrimitiveKind::Circle:
        if (p.r < 0) out.push_back(at + ": negative radius");
        break;
      case PrimitiveKind::Line:
        if (p.points.size() != 2) out.push_back(at + ": a line needs exactly 2 points");
        break;
      case PrimitiveKind::Polyline:
        if (p.points.size() < 2) out.push_back(at + ": a polyline needs at least 2 points");
        break;
      case PrimitiveKind::Text:
        if (p.size < 1 || p.size > 8) out.push_back(at + ": text size outside [1,8]");
        break;
    }
    for (const auto& pt : p.points)
      if (!finite(pt.x) || !finite(pt.y)) out.push_back(at + ": non-finite point");
  }
}

}  // namespace

std::string to_hex(Rgb c) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s = "#";
  for (std::uint8_t v : {c.r, c.g, c.b}) {
    s += digits[v >> 4];
    s += digits[v & 15];
  }
  return s;
}

Rgb rgb_from_hex(std::string_view hex) {
  auto nibble = [&](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw DataError("bad color '" + std::string(hex) + "'");
  };
  if (hex.size() != 7 || hex[0] != '#') throw DataError("bad color '" + std::string(hex) + "'");
  auto byte = [&](int i) {
    return static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1]));
  };
  return {byte(1), byte(3), byte(5)};
}

std::string_view to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Bar: return "bar";
    case SeriesKind::Line: return "line";
    case SeriesKind::Scatter: return "scatter";
  }
  return "bar";
}

SeriesKind series_kind_from_string(std::string_view text) {
  if (text == "bar") return SeriesKind::Bar;
  if (text == "line") return SeriesKind::Line;
  if (text == "scatter") return SeriesKind::Scatter;
  throw DataError("unknown series kind '" + std::string(text) + "'");
}

std::string_view to_string(Align a) {
  switch (a) {
    case Align::Left: return "left";
    case Align::Center: return "center";
    case Align::Right: return "right";
  }
  return "left";
}

Align align_from_string(std::string_view text) {
  if (text == "left") return Align::Left;
  if (text == "center") return Align::Center;
  if (text == "right") return Align::Right;
  throw DataError("unknown alignment '" + std::string(text) + "'");
}

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Rect: return "rect";
    case PrimitiveKind::Circle: return "circle";
    case PrimitiveKind::Line: return "line";
    case PrimitiveKind::Polyline: return "polyline";
    case PrimitiveKind::Text: return "text";
  }
  return "rect";
}

PrimitiveKind primitive_kind_from_string(std::string_view text) {
  if (text == "rect") return PrimitiveKind::Rect;
  if (text == "circle") return PrimitiveKind::Circle;
  if (text == "line") return PrimitiveKind::Line;
  if (text == "polyline") return PrimitiveKind::Polyline;
  if (text == "text") return PrimitiveKind::Text;
  throw DataError("unknown primitive kind '" + std::string(text) + "'");
}

Json to_json(const StructuredDoc& doc) {
  Json body;
  switch (doc.task) {
    case TaskKind::Chart: body = chart_json(doc.chart()); break;
    case TaskKind::Table: body = table_json(doc.table()); break;
    case TaskKind::Svg: body = svg_json(doc.svg()); break;
  }
  Json j{{"task", std::string(to_string(doc.task))}, {"body", body}};
  if (doc.raw_code) j["raw_code"] = *doc.raw_code;
  return j;
}

StructuredDoc doc_from_json(const Json& j) {
  StructuredDoc d;
  d.task = task_from_string(req<std::string>(j, "task", "doc"));
  const Json& body = field(j, "body", "doc");
  switch (d.task) {
    case TaskKind::Chart: d.body = chart_from(body); break;
    case TaskKind::Table: d.body = table_from(body); break;
    case TaskKind::Svg: d.body = svg_from(body); break;
  }
  if (auto it = j.find("raw_code"); it != j.end() && !it->is_null())
    d.raw_code = get_as<std::string>(*it, "raw_code", "doc");
  return d;
}

std::string canonical_serialize(const StructuredDoc& doc) { return canonical_dump(to_json(doc)); }

StructuredDoc parse_doc(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("doc: not valid JSON");
  return doc_from_json(j);
}

std::vector<std::string> doc_violations(const StructuredDoc& doc) {
  std::vector<std::string> out;
  switch (doc.task) {
    case TaskKind::Chart: chart_violations(doc.chart(), out); break;
    case TaskKind::Table: table_violations(doc.table(), out); break;
    case TaskKind::Svg: svg_violations(doc.svg(), out); break;
  }
  return out;
}

const TableCell* find_cell(const TableSpec& t, int row, int col) {
  for (const auto& c : t.cells)
    if (c.row == row && c.col == col) return &c;
  return nullptr;
}

TableCell* find_cell(TableSpec& t, int row, int col) {
  return const_cast<TableCell*>(find_cell(static_cast<const TableSpec&>(t), row, col));
}

Align column_align(const TableSpec& t, int col) {
  if (col < 0 || col >= static_cast<int>(t.align.size())) return Align::Left;
  return t.align[col];
}

const SvgPrimitive* find_primitive(const SvgDoc& d, std::string_view id) {
  for (const auto& p : d.primitives)
    if (p.id == id) return &p;
  return nullptr;
}

SvgPrimitive* find_primitive(SvgDoc& d, std::string_view id) {
  return const_cast<SvgPrimitive*>(find_primitive(static_cast<const SvgDoc&>(d), id));
}

}  // namespace verm
