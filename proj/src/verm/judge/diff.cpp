#include "verm/judge/diff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "verm/corrupt/catalog.hpp"

namespace verm {

namespace {

using catalog::is_digit;

std::string quote(std::string_view s) { return "'" + std::string(s) + "'"; }
std::string num(double v) { return format_number(v); }
std::string str(std::string_view s) { return std::string(s); }

/// Ratio shown in templated text; drops float noise such as 2.0000000000000004.
double tidy(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

class Emitter {
 public:
  void add(std::string_view category, SeverityLevel severity, std::string location, std::string description) {
    items_.push_back({std::string(category), severity, std::move(location), std::move(description)});
  }
  std::vector<ErrorItem> take() { return std::move(items_); }

 private:
  std::vector<ErrorItem> items_;
};

// ---- chart ----------------------------------------------------------------

void diff_series_values(const Series& g, const Series& p, int i, Emitter& out) {
  if (g.points.size() != p.points.size()) {
    out.add("data_error", SeverityLevel::Critical, catalog::series_values(i),
            "series " + std::to_string(i) + " has " + std::to_string(p.points.size()) + " points instead of " +
                std::to_string(g.points.size()));
    return;
  }
  std::vector<int> changed;
  for (int j = 0; j < static_cast<int>(g.points.size()); ++j)
    if (g.points[j] != p.points[j]) changed.push_back(j);
  if (changed.empty()) return;

  const bool all_changed = changed.size() == g.points.size() && changed.size() >= 2;
  if (all_changed) {
    bool uniform = true;
    const double r0 = p.points[0].y / g.points[0].y;
    for (std::size_t j = 0; j < g.points.size() && uniform; ++j) {
      const Point& a = g.points[j];
      const Point& b = p.points[j];
      uniform = a.x == b.x && a.y != 0.0 && std::isfinite(r0) && r0 > 0.0 &&
                std::fabs(b.y / a.y - r0) <= 1e-9 * std::fabs(r0);
    }
    if (uniform) {
      out.add("data_error", catalog::grade_scale(r0), catalog::series_values(i),
              "series " + std::to_string(i) + " values scaled by " + num(tidy(r0)));
      return;
    }
  }
  for (int j : changed) {
    const Point& a = g.points[j];
    const Point& b = p.points[j];
    std::string desc = "series " + std::to_string(i) + " point " + std::to_string(j);
    if (a.x != b.x) desc += " moved from x=" + num(a.x) + " to x=" + num(b.x) + ";";
    desc += " value changed from " + num(a.y) + " to " + num(b.y);
    const SeverityLevel sev = a.x != b.x ? SeverityLevel::Critical : catalog::grade_value_change(a.y, b.y);
    out.add("data_error", sev, catalog::series_point(i, j), std::move(desc));
  }
}

void diff_chart(const ChartSpec& g, const ChartSpec& p, Emitter& out) {
  if (g.width != p.width || g.height != p.height)
    out.add("structure_error", SeverityLevel::Critical, str(catalog::kCanvas),
            "canvas is " + std::to_string(p.width) + "x" + std::to_string(p.height) + " instead of " +
                std::to_string(g.width) + "x" + std::to_string(g.height));
  if (g.title != p.title)
    out.add("text_error", SeverityLevel::Moderate, str(catalog::kTitle),
            "title reads " + quote(p.title) + " instead of " + quote(g.title));
  if (g.legend != p.legend)
    out.add("structure_error", SeverityLevel::Moderate, str(catalog::kLegend),
            g.legend ? "legend is missing" : "extraneous legend");
  if (g.x_range != p.x_range || g.y_range != p.y_range)
    out.add("structure_error", SeverityLevel::Moderate, str(catalog::kAxes), "axis ranges differ");

  const std::size_t nt = std::max(g.tick_labels.size(), p.tick_labels.size());
  for (std::size_t i = 0; i < nt; ++i) {
    const int t = static_cast<int>(i);
    if (i >= p.tick_labels.size())
      out.add("text_error", SeverityLevel::Minor, catalog::tick(t), "x-axis tick " + std::to_string(t) + " missing");
    else if (i >= g.tick_labels.size())
      out.add("text_error", SeverityLevel::Minor, catalog::tick(t), "extraneous x-axis tick " + std::to_string(t));
    else if (g.tick_labels[i] != p.tick_labels[i])
      out.add("text_error", SeverityLevel::Minor, catalog::tick(t),
              "x-axis tick " + std::to_string(t) + " reads " + quote(p.tick_labels[i]) + " instead of " +
                  quote(g.tick_labels[i]));
  }

  const int ng = static_cast<int>(g.series.size());
  const int np = static_cast<int>(p.series.size());
  const int n = std::min(ng, np);
  for (int i = n; i < ng; ++i)
    out.add("structure_error", SeverityLevel::Critical, catalog::series_slot(i),
            "series " + std::to_string(i) + " is missing");
  for (int i = n; i < np; ++i)
    out.add("structure_error", SeverityLevel::Critical, catalog::series_slot(i),
            "extraneous series " + std::to_string(i));

  for (int i = 0; i < n; ++i) {
    const Series& a = g.series[i];
    const Series& b = p.series[i];
    if (a.kind != b.kind)
      out.add("structure_error", SeverityLevel::Critical, catalog::series_type(i),
              "series " + std::to_string(i) + " drawn as " + str(to_string(b.kind)) + " instead of " +
                  str(to_string(a.kind)));
    if (a.label != b.label)
      out.add("text_error", SeverityLevel::Minor, catalog::series_label(i),
              "series " + std::to_string(i) + " label reads " + quote(b.label) + " instead of " + quote(a.label));
    diff_series_values(a, b, i, out);
  }

  std::vector<int> recolored;
  for (int i = 0; i < n; ++i)
    if (g.series[i].color != p.series[i].color) recolored.push_back(i);
  std::vector<bool> paired(recolored.size(), false);
  for (std::size_t u = 0; u < recolored.size(); ++u) {
    if (paired[u]) continue;
    const int i = recolored[u];
    for (std::size_t v = u + 1; v < recolored.size(); ++v) {
      const int j = recolored[v];
      if (paired[v]) continue;
      if (p.series[i].color == g.series[j].color && p.series[j].color == g.series[i].color) {
        paired[u] = paired[v] = true;
        out.add("style_error", SeverityLevel::Moderate, catalog::series_colors(i, j),
                "colors of series " + std::to_string(i) + " and " + std::to_string(j) + " are swapped");
        break;
      }
    }
    if (!paired[u])
      out.add("style_error", SeverityLevel::Minor, catalog::series_color(i),
              "series " + std::to_string(i) + " color changed from " + to_hex(g.series[i].color) + " to " +
                  to_hex(p.series[i].color));
  }
}

// ---- table ----------------------------------------------------------------

bool overlaps(const TableCell& a, const TableCell& b) {
  return a.row < b.row + b.rowspan && b.row < a.row + a.rowspan && a.col < b.col + b.colspan &&
         b.col < a.col + a.colspan;
}

bool same_shape(const TableCell& a, const TableCell& b) {
  return a.row == b.row && a.col == b.col && a.rowspan == b.rowspan && a.colspan == b.colspan;
}

const TableCell* same_shape_in(const TableSpec& t, const TableCell& c) {
  const TableCell* x = find_cell(t, c.row, c.col);
  return x && same_shape(*x, c) ? x : nullptr;
}

std::string text_at(const TableSpec& t, int row, int col) {
  const TableCell* c = find_cell(t, row, col);
  return c ? c->text : std::string();
}

void diff_cell_text(const std::string& g, const std::string& p, const std::string& loc, Emitter& out) {
  if (g == p) return;
  if (g.size() == p.size()) {
    std::vector<std::size_t> diffs;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (g[k] != p[k]) diffs.push_back(k);
    if (diffs.size() == 1) {
      const char a = g[diffs[0]], b = p[diffs[0]];
      if (is_digit(a) && is_digit(b)) {
        out.add("numeric_error", SeverityLevel::Critical, loc,
                "digit " + quote(std::string(1, a)) + " rendered as " + quote(std::string(1, b)));
      } else if (a == '.' && b == ',') {
        out.add("numeric_error", SeverityLevel::Moderate, loc, "decimal point rendered as comma");
      } else {
        out.add("text_error", SeverityLevel::Minor, loc,
                "character " + quote(std::string(1, a)) + " rendered as " + quote(std::string(1, b)));
      }
      return;
    }
  }
  if (auto parts = catalog::split_unit(g); parts && parts->first == p) {
    auto unit = parts->second;
    if (!unit.empty() && unit.front() == ' ') unit.erase(0, 1);
    out.add("text_error", SeverityLevel::Moderate, loc, "unit " + quote(unit) + " missing");
    return;
  }
  out.add("text_error", SeverityLevel::Moderate, loc, "text reads " + quote(p) + " instead of " + quote(g));
}

void diff_table(const TableSpec& g, const TableSpec& p, Emitter& out) {
  if (g.rows != p.rows || g.cols != p.cols)
    out.add("layout_error", SeverityLevel::Critical, str(catalog::kTableShape),
            "table is " + std::to_string(p.rows) + "x" + std::to_string(p.cols) + " instead of " +
                std::to_string(g.rows) + "x" + std::to_string(g.cols));

  // Cells whose footprint changed, grouped into overlapping components.
  struct Node {
    const TableCell* cell;
    bool in_gt;
  };
  std::vector<Node> nodes;
  for (const auto& c : g.cells)
    if (!same_shape_in(p, c)) nodes.push_back({&c, true});
  for (const auto& c : p.cells)
    if (!same_shape_in(g, c)) nodes.push_back({&c, false});
  std::vector<int> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      if (overlaps(*nodes[a].cell, *nodes[b].cell)) parent[find(a)] = find(b);
  std::map<int, std::vector<int>> components;
  for (std::size_t a = 0; a < nodes.size(); ++a) components[find(a)].push_back(a);

  std::set<int> structural_cols;
  std::vector<std::pair<std::pair<int, int>, ErrorItem>> structural;
  for (const auto& [root, members] : components) {
    std::vector<const TableCell*> gc, pc;
    for (int m : members) (nodes[m].in_gt ? gc : pc).push_back(nodes[m].cell);
    auto by_pos = [](const TableCell* a, const TableCell* b) { return std::tie(a->row, a->col) < std::tie(b->row, b->col); };
    std::sort(gc.begin(), gc.end(), by_pos);
    std::sort(pc.begin(), pc.end(), by_pos);
    for (const auto* c : gc)
      for (int k = c->col; k < c->col + c->colspan; ++k) structural_cols.insert(k);
    for (const auto* c : pc)
      for (int k = c->col; k < c->col + c->colspan; ++k) structural_cols.insert(k);

    auto single = [](const TableCell* c) { return c->rowspan == 1 && c->colspan == 1; };
    const bool merged = pc.size() == 1 && gc.size() >= 2 && std::all_of(gc.begin(), gc.end(), single) &&
                        gc.front()->row == pc.front()->row && gc.front()->col == pc.front()->col;
    const bool split = gc.size() == 1 && pc.size() >= 2 && std::all_of(pc.begin(), pc.end(), single) &&
                       gc.front()->row == pc.front()->row && gc.front()->col == pc.front()->col;
    if (merged) {
      const TableCell& m = *pc.front();
      const std::string loc = catalog::cell(m.row, m.col);
      const std::string desc = gc.size() == 2 && m.colspan == 2 && m.rowspan == 1
                                   ? "cells at col " + std::to_string(m.col) + " and " + std::to_string(m.col + 1) + " merged"
                                   : "cells merged";
      out.add("layout_error", SeverityLevel::Moderate, loc, desc);
      diff_cell_text(gc.front()->text, m.text, loc, out);
    } else if (split) {
      const TableCell& s = *gc.front();
      const std::string loc = catalog::cell(s.row, s.col);
      out.add("layout_error", SeverityLevel::Moderate, loc, "spanning cell split into single cells");
      diff_cell_text(s.text, pc.front()->text, loc, out);
    } else {
      const TableCell* first = gc.empty() ? pc.front() : pc.empty() ? gc.front() : std::min(gc.front(), pc.front(), by_pos);
      out.add("layout_error", SeverityLevel::Moderate, catalog::cell(first->row, first->col), "cell structure differs");
    }
  }

  // Column swaps among columns without spanning or structurally changed cells.
  const int cols = std::min(g.cols, p.cols);
  const int rows = std::min(g.rows, p.rows);
  auto plain_column = [&](int col) {
    if (structural_cols.contains(col)) return false;
    for (const TableSpec* t : {&g, &p})
      for (const auto& c : t->cells)
        if (c.col <= col && col < c.col + c.colspan && (c.colspan != 1 || c.rowspan != 1)) return false;
    return true;
  };
  auto column_equal = [&](const TableSpec& x, int a, const TableSpec& y, int b) {
    if (column_align(x, a) != column_align(y, b)) return false;
    for (int r = 0; r < rows; ++r)
      if (text_at(x, r, a) != text_at(y, r, b)) return false;
    return true;
  };
  std::set<int> swapped;
  for (int a = 0; a < cols; ++a) {
    if (swapped.contains(a) || !plain_column(a) || column_equal(g, a, p, a)) continue;
    for (int b = a + 1; b < cols; ++b) {
      if (swapped.contains(b) || !plain_column(b) || column_equal(g, a, g, b)) continue;
      if (column_equal(p, a, g, b) && column_equal(p, b, g, a)) {
        swapped.insert(a);
        swapped.insert(b);
        out.add("layout_error", SeverityLevel::Critical, catalog::columns(a, b),
                "columns " + std::to_string(a) + " and " + std::to_string(b) + " are swapped");
        break;
      }
    }
  }

  for (int c = 0; c < cols; ++c)
    if (!swapped.contains(c) && column_align(g, c) != column_align(p, c))
      out.add("layout_error", SeverityLevel::Minor, catalog::column_alignment(c),
              "column " + std::to_string(c) + " aligned " + str(to_string(column_align(p, c))) + " instead of " +
                  str(to_string(column_align(g, c))));

  std::vector<const TableCell*> ordered;
  for (const auto& c : g.cells) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(),
            [](const TableCell* a, const TableCell* b) { return std::tie(a->row, a->col) < std::tie(b->row, b->col); });
  for (const TableCell* c : ordered) {
    if (swapped.contains(c->col)) continue;
    const TableCell* q = same_shape_in(p, *c);
    if (!q) continue;
    diff_cell_text(c->text, q->text, catalog::cell(c->row, c->col), out);
  }
}

// ---- svg ------------------------------------------------------------------

double geometry_delta(const SvgPrimitive& a, const SvgPrimitive& b, double& dx, double& dy) {
  double m = 0.0;
  auto take = [&](double u, double v) { m = std::max(m, std::fabs(u - v)); };
  dx = dy = 0.0;
  if (a.kind == PrimitiveKind::Line || a.kind == PrimitiveKind::Polyline) {
    for (std::size_t k = 0; k < a.points.size(); ++k) {
      take(a.points[k].x, b.points[k].x);
      take(a.points[k].y, b.points[k].y);
      if ((dx == 0.0 && dy == 0.0) && a.points[k] != b.points[k]) {
        dx = b.points[k].x - a.points[k].x;
        dy = b.points[k].y - a.points[k].y;
      }
    }
    return m;
  }
  dx = b.x - a.x;
  dy = b.y - a.y;
  take(a.x, b.x);
  take(a.y, b.y);
  switch (a.kind) {
    case PrimitiveKind::Rect:
      take(a.width, b.width);
      take(a.height, b.height);
      break;
    case PrimitiveKind::Circle: take(a.r, b.r); break;
    default: break;
  }
  return m;
}

void diff_primitive(const SvgPrimitive& a, const SvgPrimitive& b, Emitter& out) {
  const std::string loc = catalog::primitive(a.id);
  if (a.kind != b.kind) {
    out.add("shape_error", SeverityLevel::Critical, loc,
            "primitive " + a.id + " drawn as " + str(to_string(b.kind)) + " instead of " + str(to_string(a.kind)));
    return;
  }
  if (a.points.size() != b.points.size()) {
    out.add("shape_error", SeverityLevel::Moderate, loc,
            "primitive " + a.id + " has " + std::to_string(b.points.size()) + " vertices instead of " +
                std::to_string(a.points.size()));
  } else {
    double dx = 0.0, dy = 0.0;
    const double m = geometry_delta(a, b, dx, dy);
    if (m > 0.0)
      out.add("shape_error", catalog::grade_displacement(m), loc,
              "primitive " + a.id + " displaced by (" + num(dx) + ", " + num(dy) + ")");
  }
  if (a.group != b.group)
    out.add("structure_error", SeverityLevel::Moderate, loc,
            "primitive " + a.id + " placed in group " + std::to_string(b.group));
  if (a.stroke_width != b.stroke_width)
    out.add("style_error", SeverityLevel::Minor, loc,
            "stroke width " + num(b.stroke_width) + " instead of " + num(a.stroke_width));
  if (a.fill != b.fill)
    out.add("style_error", SeverityLevel::Moderate, loc,
            b.fill ? "fill color " + to_hex(*b.fill) : std::string("fill missing"));
  if (a.stroke != b.stroke)
    out.add("style_error", SeverityLevel::Minor, loc,
            b.stroke ? "stroke color " + to_hex(*b.stroke) : std::string("stroke missing"));
  if (a.opacity != b.opacity)
    out.add("style_error", SeverityLevel::Minor, loc, "opacity " + num(b.opacity) + " instead of " + num(a.opacity));
  if (a.text != b.text) {
    std::vector<std::size_t> diffs;
    if (a.text.size() == b.text.size())
      for (std::size_t k = 0; k < a.text.size(); ++k)
        if (a.text[k] != b.text[k]) diffs.push_back(k);
    if (diffs.size() == 1)
      out.add("text_symbol_error", SeverityLevel::Moderate, loc,
              "glyph " + quote(std::string(1, a.text[diffs[0]])) + " rendered as " +
                  quote(std::string(1, b.text[diffs[0]])));
    else
      out.add("text_symbol_error", SeverityLevel::Moderate, loc,
              "text reads " + quote(b.text) + " instead of " + quote(a.text));
  }
  if (a.size != b.size)
    out.add("text_symbol_error", SeverityLevel::Minor, loc,
            "text size " + std::to_string(b.size) + " instead of " + std::to_string(a.size));
}

bool is_border(const SvgDoc& d, const SvgPrimitive& q) {
  return q.id == catalog::kBorderId && q.kind == PrimitiveKind::Rect && q.x == 0.0 && q.y == 0.0 &&
         q.width == d.width && q.height == d.height && !q.fill;
}

void diff_svg(const SvgDoc& g, const SvgDoc& p, Emitter& out) {
  if (g.width != p.width || g.height != p.height)
    out.add("structure_error", SeverityLevel::Critical, str(catalog::kCanvas),
            "canvas is " + std::to_string(p.width) + "x" + std::to_string(p.height) + " instead of " +
                std::to_string(g.width) + "x" + std::to_string(g.height));
  if (g.background != p.background)
    out.add("style_error", SeverityLevel::Moderate, str(catalog::kCanvas),
            "background " + to_hex(p.background) + " instead of " + to_hex(g.background));

  std::map<int, const SvgGroup*> gg, pg;
  for (const auto& x : g.groups) gg[x.id] = &x;
  for (const auto& x : p.groups) pg[x.id] = &x;
  std::set<int> group_ids;
  for (const auto& [id, _] : gg) group_ids.insert(id);
  for (const auto& [id, _] : pg) group_ids.insert(id);
  for (int id : group_ids) {
    const SvgGroup* a = gg.contains(id) ? gg[id] : nullptr;
    const SvgGroup* b = pg.contains(id) ? pg[id] : nullptr;
    if (!a || !b || *a != *b)
      out.add("structure_error", SeverityLevel::Moderate, catalog::group(id),
              "group " + std::to_string(id) + (!a ? " is extraneous" : !b ? " is missing" : " has a different offset"));
  }

  std::vector<std::string> common_g, common_p;
  for (const auto& a : g.primitives) {
    const SvgPrimitive* b = find_primitive(p, a.id);
    if (!b) {
      out.add("shape_error", SeverityLevel::Critical, catalog::primitive(a.id), "primitive " + a.id + " is missing");
      continue;
    }
    common_g.push_back(a.id);
    diff_primitive(a, *b, out);
  }
  for (const auto& b : p.primitives) {
    if (find_primitive(g, b.id)) {
      common_p.push_back(b.id);
      continue;
    }
    if (is_border(p, b))
      out.add("structure_error", SeverityLevel::Minor, str(catalog::kBorder), "extraneous border drawn around the canvas");
    else
      out.add("shape_error", SeverityLevel::Moderate, catalog::primitive(b.id), "extraneous primitive " + b.id);
  }
  if (common_g != common_p)
    out.add("structure_error", SeverityLevel::Moderate, str(catalog::kLayerOrder), "primitives drawn in a different order");
}

// ---- revert ---------------------------------------------------------------

template <typename... Args>
bool scan(const std::string& s, const char* fmt, Args*... args) {
  int consumed = -1;
  const std::string f = std::string(fmt) + "%n";
  std::sscanf(s.c_str(), f.c_str(), args..., &consumed);
  return consumed == static_cast<int>(s.size());
}

void revert_chart(ChartSpec& c, const ChartSpec& g, const std::string& loc) {
  int a = -1, b = -1;
  auto has = [](const auto& v, int i) { return i >= 0 && i < static_cast<int>(v.size()); };
  if (loc == catalog::kTitle) c.title = g.title;
  else if (loc == catalog::kLegend) c.legend = g.legend;
  else if (loc == catalog::kAxes) {
    c.x_range = g.x_range;
    c.y_range = g.y_range;
  } else if (loc == catalog::kCanvas) {
    c.width = g.width;
    c.height = g.height;
  } else if (scan(loc, "x-axis tick %d", &a)) {
    if (has(g.tick_labels, a)) {
      if (!has(c.tick_labels, a)) c.tick_labels.resize(a + 1);
      c.tick_labels[a] = g.tick_labels[a];
    } else {
      c.tick_labels.resize(std::min(c.tick_labels.size(), g.tick_labels.size()));
    }
  } else if (scan(loc, "series %d and %d colors", &a, &b)) {
    if (has(c.series, a) && has(g.series, a)) c.series[a].color = g.series[a].color;
    if (has(c.series, b) && has(g.series, b)) c.series[b].color = g.series[b].color;
  } else if (scan(loc, "series %d point %d", &a, &b)) {
    if (has(c.series, a) && has(g.series, a) && has(c.series[a].points, b) && has(g.series[a].points, b))
      c.series[a].points[b] = g.series[a].points[b];
  } else if (scan(loc, "series %d color", &a)) {
    if (has(c.series, a) && has(g.series, a)) c.series[a].color = g.series[a].color;
  } else if (scan(loc, "series %d values", &a)) {
    if (has(c.series, a) && has(g.series, a)) c.series[a].points = g.series[a].points;
  } else if (scan(loc, "series %d type", &a)) {
    if (has(c.series, a) && has(g.series, a)) c.series[a].kind = g.series[a].kind;
  } else if (scan(loc, "series %d label", &a)) {
    if (has(c.series, a) && has(g.series, a)) c.series[a].label = g.series[a].label;
  } else if (scan(loc, "series %d", &a)) {
    if (has(g.series, a)) {
      if (has(c.series, a)) c.series[a] = g.series[a];
      else if (a == static_cast<int>(c.series.size())) c.series.push_back(g.series[a]);
    } else if (has(c.series, a)) {
      c.series.erase(c.series.begin() + a);
    }
  }
}

void revert_table(TableSpec& t, const TableSpec& g, const std::string& loc) {
  int a = -1, b = -1;
  auto restore_where = [&](auto&& hit) {
    std::erase_if(t.cells, hit);
    for (const auto& c : g.cells)
      if (hit(c)) t.cells.push_back(c);
  };
  if (loc == catalog::kTableShape) {
    t.rows = g.rows;
    t.cols = g.cols;
    t.align = g.align;
  } else if (scan(loc, "columns %d and %d", &a, &b)) {
    restore_where([&](const TableCell& c) { return c.col == a || c.col == b; });
    for (int col : {a, b})
      if (col >= 0 && col < static_cast<int>(t.align.size()) && col < static_cast<int>(g.align.size()))
        t.align[col] = g.align[col];
  } else if (scan(loc, "column %d alignment", &a)) {
    if (a >= 0 && a < static_cast<int>(g.align.size())) {
      if (t.align.size() < g.align.size()) t.align.resize(g.align.size(), Align::Left);
      t.align[a] = g.align[a];
    }
  } else if (scan(loc, "row %d col %d", &a, &b)) {
    std::vector<TableCell> region;
    if (const TableCell* x = find_cell(g, a, b)) region.push_back(*x);
    if (const TableCell* x = find_cell(t, a, b)) region.push_back(*x);
    if (region.empty()) return;
    restore_where([&](const TableCell& c) {
      return std::any_of(region.begin(), region.end(), [&](const TableCell& r) { return overlaps(c, r); });
    });
  }
  std::sort(t.cells.begin(), t.cells.end(),
            [](const TableCell& x, const TableCell& y) { return std::tie(x.row, x.col) < std::tie(y.row, y.col); });
}

void revert_svg(SvgDoc& d, const SvgDoc& g, const std::string& loc) {
  int a = -1;
  if (loc == catalog::kCanvas) {
    d.width = g.width;
    d.height = g.height;
    d.background = g.background;
  } else if (loc == catalog::kBorder) {
    std::erase_if(d.primitives, [](const SvgPrimitive& q) { return q.id == catalog::kBorderId; });
  } else if (loc == catalog::kLayerOrder) {
    std::vector<SvgPrimitive> ordered;
    for (const auto& q : g.primitives)
      if (const SvgPrimitive* x = find_primitive(d, q.id)) ordered.push_back(*x);
    for (const auto& q : d.primitives)
      if (!find_primitive(g, q.id)) ordered.push_back(q);
    d.primitives = std::move(ordered);
  } else if (scan(loc, "group %d", &a)) {
    std::erase_if(d.groups, [&](const SvgGroup& x) { return x.id == a; });
    for (const auto& x : g.groups)
      if (x.id == a) d.groups.push_back(x);
    std::sort(d.groups.begin(), d.groups.end(), [](const SvgGroup& x, const SvgGroup& y) { return x.id < y.id; });
  } else if (loc.starts_with("primitive ")) {
    const std::string id = loc.substr(10);
    const SvgPrimitive* want = find_primitive(g, id);
    SvgPrimitive* have = find_primitive(d, id);
    if (!want) {
      std::erase_if(d.primitives, [&](const SvgPrimitive& q) { return q.id == id; });
    } else if (have) {
      *have = *want;
    } else {
      // Insert after the nearest primitive that precedes it in the reference order.
      auto pos = d.primitives.begin();
      for (const auto& q : g.primitives) {
        if (q.id == id) break;
        auto it = std::find_if(d.primitives.begin(), d.primitives.end(),
                               [&](const SvgPrimitive& x) { return x.id == q.id; });
        if (it != d.primitives.end()) pos = it + 1;
      }
      d.primitives.insert(pos, *want);
    }
  }
}

}  // namespace

DiscrepancyReport diff_docs(const StructuredDoc& gt, const StructuredDoc& pred) {
  Emitter out;
  if (gt.task != pred.task) {
    out.add(taxonomy(gt.task).front(), SeverityLevel::Critical, "document", "prediction is a different kind of document");
    return DiscrepancyReport::from_errors(gt.task, out.take());
  }
  switch (gt.task) {
    case TaskKind::Chart: diff_chart(gt.chart(), pred.chart(), out); break;
    case TaskKind::Table: diff_table(gt.table(), pred.table(), out); break;
    case TaskKind::Svg: diff_svg(gt.svg(), pred.svg(), out); break;
  }
  return DiscrepancyReport::from_errors(gt.task, out.take());
}

StructuredDoc revert_error(const StructuredDoc& prev, const StructuredDoc& gt, const ErrorItem& item) {
  StructuredDoc out = prev;
  if (prev.task != gt.task) return gt;
  switch (gt.task) {
    case TaskKind::Chart: revert_chart(out.chart(), gt.chart(), item.location); break;
    case TaskKind::Table: revert_table(out.table(), gt.table(), item.location); break;
    case TaskKind::Svg: revert_svg(out.svg(), gt.svg(), item.location); break;
  }
  return out;
}

}  // namespace verm
