#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "verm/core/doc.hpp"

namespace verm::testing {

inline StructuredDoc two_bar_chart() {
  ChartSpec c;
  c.title = "Two bars";
  c.tick_labels = {"a", "b"};
  Series s;
  s.kind = SeriesKind::Bar;
  s.label = "values";
  s.color = {0x1f, 0x77, 0xb4};
  s.points = {{0.0, 3.0}, {1.0, 5.0}};
  c.series.push_back(s);
  return StructuredDoc::make(c);
}

inline StructuredDoc three_series_chart() {
  ChartSpec c;
  c.title = "Quarterly Sales";
  c.tick_labels = {"Q1", "Q2", "Q3", "Q4"};
  const Rgb colors[] = {{0x1f, 0x77, 0xb4}, {0xff, 0x7f, 0x0e}, {0x2c, 0xa0, 0x2c}};
  const SeriesKind kinds[] = {SeriesKind::Bar, SeriesKind::Line, SeriesKind::Scatter};
  for (int s = 0; s < 3; ++s) {
    Series series;
    series.kind = kinds[s];
    series.label = "s" + std::to_string(s);
    series.color = colors[s];
    for (int i = 0; i < 4; ++i) series.points.push_back({static_cast<double>(i), 2.0 + s + 1.5 * i});
    c.series.push_back(series);
  }
  return StructuredDoc::make(c);
}

/// 4x3 table; cell (2,1) reads "10.5 kg".
inline StructuredDoc small_table() {
  TableSpec t;
  t.rows = 4;
  t.cols = 3;
  t.align = {Align::Left, Align::Right, Align::Center};
  const char* text[4][3] = {{"Item", "Mass", "Share"},
                            {"alpha", "12.5 kg", "40%"},
                            {"beta", "10.5 kg", "35%"},
                            {"gamma", "7 kg", "25%"}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) t.cells.push_back({r, c, 1, 1, text[r][c]});
  return StructuredDoc::make(t);
}

inline StructuredDoc small_svg() {
  SvgDoc d;
  d.width = 200;
  d.height = 120;
  d.groups.push_back({1, 10.0, 5.0});
  SvgPrimitive rect;
  rect.kind = PrimitiveKind::Rect;
  rect.id = "r";
  rect.x = 20;
  rect.y = 20;
  rect.width = 40;
  rect.height = 30;
  rect.fill = Rgb{0x1f, 0x77, 0xb4};
  rect.stroke = Rgb{0xd6, 0x27, 0x28};
  rect.stroke_width = 2;
  SvgPrimitive label;
  label.kind = PrimitiveKind::Text;
  label.id = "t";
  label.x = 110;
  label.y = 40;
  label.text = "A1";
  label.size = 2;
  label.fill = Rgb{0, 0, 0};
  d.primitives = {rect, label};
  return StructuredDoc::make(d);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("verm_test_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace verm::testing
