#include "verm/render/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace verm {

namespace {

constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kWhite{255, 255, 255};

int snap(double v) { return static_cast<int>(std::lround(v)); }

std::string tick_text(double v) {
  if (std::fabs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---- chart ----------------------------------------------------------------

AxisRange auto_y_range(const ChartSpec& c) {
  double peak = 0.0;
  for (const auto& s : c.series)
    for (const auto& p : s.points) peak = std::max(peak, std::fabs(p.y));
  if (peak == 0.0) return {0.0, 1.0};
  return {0.0, 1.05 * peak};
}

AxisRange auto_x_range(const ChartSpec& c) {
  double lo = 0.0, hi = static_cast<double>(c.tick_labels.size()) - 1.0;
  bool any = !c.tick_labels.empty();
  for (const auto& s : c.series)
    for (const auto& p : s.points) {
      lo = std::min(lo, p.x);
      hi = any ? std::max(hi, p.x) : p.x;
      any = true;
    }
  if (!any) hi = 0.0;
  return {lo - 0.5, std::max(lo, hi) + 0.5};
}

RenderResult render_chart(const ChartSpec& c) {
  using namespace chart_layout;
  const int left = kMarginLeft, right = c.width - kMarginRight;
  const int top = kMarginTop, bottom = c.height - kMarginBottom;
  if (right - left < 8 || bottom - top < 8)
    return RenderResult::failure("canvas: too small for the plot area");

  const AxisRange xr = c.x_range.value_or(auto_x_range(c));
  const AxisRange yr = c.y_range.value_or(auto_y_range(c));
  auto px = [&](double x) { return left + snap((x - xr.min) / (xr.max - xr.min) * (right - left)); };
  auto py = [&](double y) { return bottom - snap((y - yr.min) / (yr.max - yr.min) * (bottom - top)); };

  Canvas cv(c.width, c.height, kWhite);

  // axes
  cv.fill_rect(left, bottom, right + 1, bottom + 1, kBlack);
  cv.fill_rect(left, top, left + 1, bottom + 1, kBlack);

  // ticks
  for (int k = 0; k <= 5; ++k) {
    const double v = yr.min + (yr.max - yr.min) * k / 5.0;
    const int ty = py(v);
    cv.fill_rect(left - 4, ty, left, ty + 1, kBlack);
    const std::string label = tick_text(v);
    cv.text(left - 6 - text_width(label), ty - kGlyphHeight / 2, label, kBlack);
  }
  for (std::size_t i = 0; i < c.tick_labels.size(); ++i) {
    const double x = static_cast<double>(i);
    if (x < xr.min || x > xr.max) continue;
    const int tx = px(x);
    cv.fill_rect(tx, bottom, tx + 1, bottom + 5, kBlack);
    const auto& label = c.tick_labels[i];
    cv.text(tx - text_width(label) / 2, bottom + 8, label, kBlack);
  }

  // series geometry
  cv.set_clip(left, top, right + 1, bottom + 1);
  int bar_series = 0;
  for (const auto& s : c.series) bar_series += s.kind == SeriesKind::Bar;
  const double unit = (right - left) / (xr.max - xr.min);
  const int group_w = std::max(1, snap(unit * 0.8));
  const int bar_w = std::max(1, group_w / std::max(1, bar_series));
  const double base = std::clamp(0.0, yr.min, yr.max);
  // Bars sit behind lines, lines behind markers, so no mark hides under a bar.
  int bar_index = 0;
  for (const auto& s : c.series) {
    if (s.kind != SeriesKind::Bar) continue;
    for (const auto& p : s.points) {
      const int x0 = px(p.x) - group_w / 2 + bar_index * bar_w;
      const int y_val = py(p.y), y_base = py(base);
      cv.fill_rect(x0, std::min(y_val, y_base), x0 + bar_w, std::max(y_val, y_base) + 1, s.color);
    }
    ++bar_index;
  }
  for (const auto& s : c.series) {
    if (s.kind != SeriesKind::Line) continue;
    if (s.points.size() == 1) {
      const int x = px(s.points[0].x), y = py(s.points[0].y);
      cv.fill_rect(x - 1, y - 1, x + 2, y + 2, s.color);
    }
    for (std::size_t i = 1; i < s.points.size(); ++i)
      cv.line(px(s.points[i - 1].x), py(s.points[i - 1].y), px(s.points[i].x), py(s.points[i].y), 2, s.color);
  }
  for (const auto& s : c.series) {
    if (s.kind != SeriesKind::Scatter) continue;
    for (const auto& p : s.points) cv.fill_circle(px(p.x), py(p.y), 3, s.color);
  }
  cv.reset_clip();

  // title
  if (!c.title.empty()) cv.text((c.width - text_width(c.title, 2)) / 2, 8, c.title, kBlack, 2);

  // legend: one row in the bottom margin, below the tick labels
  if (c.legend && !c.series.empty()) {
    int x = left;
    const int y = c.height - kGlyphHeight - 3;
    for (const auto& s : c.series) {
      cv.fill_rect(x, y, x + 10, y + 10, s.color);
      cv.text(x + 14, y, s.label, kBlack);
      x += 14 + text_width(s.label) + 16;
    }
  }
  return RenderResult::ok(std::move(cv).finish());
}

// ---- table ----------------------------------------------------------------

RenderResult render_table(const TableSpec& t) {
  constexpr int pad = kTableCellPadding;
  const int row_h = kGlyphHeight + 2 * pad;
  std::vector<int> col_w(t.cols, 2 * pad + kGlyphWidth);
  for (const auto& c : t.cells)
    if (c.colspan == 1) col_w[c.col] = std::max(col_w[c.col], text_width(c.text) + 2 * pad);

  std::vector<const TableCell*> spanning;
  for (const auto& c : t.cells)
    if (c.colspan > 1) spanning.push_back(&c);
  std::sort(spanning.begin(), spanning.end(), [](const TableCell* a, const TableCell* b) {
    return std::tie(a->colspan, a->row, a->col) < std::tie(b->colspan, b->row, b->col);
  });
  for (const TableCell* c : spanning) {
    int have = 0;
    for (int k = c->col; k < c->col + c->colspan; ++k) have += col_w[k];
    const int need = text_width(c->text) + 2 * pad;
    if (need > have) col_w[c->col + c->colspan - 1] += need - have;
  }

  std::vector<int> xs(t.cols + 1, 0), ys(t.rows + 1, 0);
  for (int k = 0; k < t.cols; ++k) xs[k + 1] = xs[k] + col_w[k];
  for (int r = 0; r < t.rows; ++r) ys[r + 1] = ys[r] + row_h;
  if (xs.back() + 1 > 8192 || ys.back() + 1 > 8192)
    return RenderResult::failure("canvas: table exceeds 8192 px");

  Canvas cv(xs.back() + 1, ys.back() + 1, kWhite);
  std::vector<char> covered(static_cast<std::size_t>(t.rows) * t.cols, 0);
  for (const auto& c : t.cells)
    for (int r = c.row; r < c.row + c.rowspan; ++r)
      for (int k = c.col; k < c.col + c.colspan; ++k) covered[static_cast<std::size_t>(r) * t.cols + k] = 1;

  // grid lines
  for (int r = 0; r < t.rows; ++r)
    for (int k = 0; k < t.cols; ++k)
      if (!covered[static_cast<std::size_t>(r) * t.cols + k])
        cv.outline_rect(xs[k], ys[r], xs[k + 1] + 1, ys[r + 1] + 1, kBlack);
  for (const auto& c : t.cells)
    cv.outline_rect(xs[c.col], ys[c.row], xs[c.col + c.colspan] + 1, ys[c.row + c.rowspan] + 1, kBlack);

  // cell text
  for (const auto& c : t.cells) {
    if (c.text.empty()) continue;
    const int x0 = xs[c.col], x1 = xs[c.col + c.colspan];
    const int tw = text_width(c.text);
    int x = x0 + pad;
    switch (column_align(t, c.col)) {
      case Align::Left: break;
      case Align::Center: x = (x0 + x1 - tw) / 2; break;
      case Align::Right: x = x1 - pad - tw; break;
    }
    const int y = ys[c.row] + (ys[c.row + c.rowspan] - ys[c.row] - kGlyphHeight) / 2;
    cv.text(x, y, c.text, kBlack);
  }
  return RenderResult::ok(std::move(cv).finish());
}

// ---- svg ------------------------------------------------------------------

void draw_primitive(Canvas& layer, const SvgPrimitive& p, double dx, double dy) {
  const int stroke_px = p.stroke_width > 0.0 ? std::max(1, snap(p.stroke_width)) : 0;
  switch (p.kind) {
    case PrimitiveKind::Rect: {
      const int x0 = snap(p.x + dx), y0 = snap(p.y + dy);
      const int x1 = snap(p.x + dx + p.width), y1 = snap(p.y + dy + p.height);
      if (p.fill) layer.fill_rect(x0, y0, x1, y1, *p.fill);
      if (p.stroke && stroke_px > 0) {
        const int s = stroke_px;
        layer.fill_rect(x0, y0, x1, std::min(y1, y0 + s), *p.stroke);
        layer.fill_rect(x0, std::max(y0, y1 - s), x1, y1, *p.stroke);
        layer.fill_rect(x0, y0, std::min(x1, x0 + s), y1, *p.stroke);
        layer.fill_rect(std::max(x0, x1 - s), y0, x1, y1, *p.stroke);
      }
      break;
    }
    case PrimitiveKind::Circle: {
      const int cx = snap(p.x + dx), cy = snap(p.y + dy), r = snap(p.r);
      const int inner = r - stroke_px;
      for (int y = cy - r; y <= cy + r; ++y)
        for (int x = cx - r; x <= cx + r; ++x) {
          const int d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
          if (d2 > r * r) continue;
          const bool on_stroke = p.stroke && stroke_px > 0 && (inner < 0 || d2 > inner * inner);
          if (on_stroke) layer.blend(x, y, *p.stroke);
          else if (p.fill) layer.blend(x, y, *p.fill);
        }
      break;
    }
    case PrimitiveKind::Line:
    case PrimitiveKind::Polyline: {
      if (!p.stroke) break;
      const int thickness = std::max(1, stroke_px);
      for (std::size_t i = 1; i < p.points.size(); ++i)
        layer.line(snap(p.points[i - 1].x + dx), snap(p.points[i - 1].y + dy),
                   snap(p.points[i].x + dx), snap(p.points[i].y + dy), thickness, *p.stroke);
      break;
    }
    case PrimitiveKind::Text: {
      const Rgb color = p.fill.value_or(p.stroke.value_or(kBlack));
      layer.text(snap(p.x + dx), snap(p.y + dy), p.text, color, p.size);
      break;
    }
  }
}

RenderResult render_svg(const SvgDoc& d) {
  std::map<int, std::pair<double, double>> translate{{0, {0.0, 0.0}}};
  for (const auto& g : d.groups) translate[g.id] = {g.dx, g.dy};
  Canvas cv(d.width, d.height, d.background);
  for (const auto& p : d.primitives) {
    const std::uint8_t alpha = opacity_alpha(p.opacity);
    if (alpha == 0) continue;
    Canvas layer(d.width, d.height);
    const auto [dx, dy] = translate.at(p.group);
    draw_primitive(layer, p, dx, dy);
    cv.composite(layer, alpha);
  }
  return RenderResult::ok(std::move(cv).finish());
}

}  // namespace

RenderResult render(const StructuredDoc& doc) {
  if (auto v = doc_violations(doc); !v.empty()) {
    std::string diag = v.front();
    for (std::size_t i = 1; i < v.size(); ++i) diag += "; " + v[i];
    return RenderResult::failure(diag);
  }
  switch (doc.task) {
    case TaskKind::Chart: return render_chart(doc.chart());
    case TaskKind::Table: return render_table(doc.table());
    case TaskKind::Svg: return render_svg(doc.svg());
  }
  return RenderResult::failure("unknown task");
}

}  // namespace verm
