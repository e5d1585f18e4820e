#include "verm/corrupt/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace verm::catalog {

namespace {
std::string n(int v) { return std::to_string(v); }
}  // namespace

std::string series_colors(int a, int b) {
  if (a > b) std::swap(a, b);
  return "series " + n(a) + " and " + n(b) + " colors";
}
std::string series_color(int i) { return "series " + n(i) + " color"; }
std::string series_values(int i) { return "series " + n(i) + " values"; }
std::string series_point(int i, int j) { return "series " + n(i) + " point " + n(j); }
std::string series_type(int i) { return "series " + n(i) + " type"; }
std::string series_label(int i) { return "series " + n(i) + " label"; }
std::string series_slot(int i) { return "series " + n(i); }
std::string tick(int i) { return "x-axis tick " + n(i); }
std::string cell(int row, int col) { return "row " + n(row) + " col " + n(col); }
std::string columns(int a, int b) {
  if (a > b) std::swap(a, b);
  return "columns " + n(a) + " and " + n(b);
}
std::string column_alignment(int c) { return "column " + n(c) + " alignment"; }
std::string primitive(std::string_view id) { return "primitive " + std::string(id); }
std::string group(int g) { return "group " + n(g); }

SeverityLevel grade_scale(double factor) {
  const double m = std::fabs(std::log(std::fabs(factor)));
  if (m < 0.3) return SeverityLevel::Minor;
  if (m < 0.9) return SeverityLevel::Moderate;
  return SeverityLevel::Critical;
}

SeverityLevel grade_value_change(double before, double after) {
  const double rel = std::fabs(after - before) / std::max(std::fabs(before), 1e-12);
  if (rel < 0.25) return SeverityLevel::Minor;
  if (rel < 0.75) return SeverityLevel::Moderate;
  return SeverityLevel::Critical;
}

SeverityLevel grade_displacement(double max_abs_delta) {
  if (max_abs_delta <= 4.0) return SeverityLevel::Minor;
  if (max_abs_delta <= 12.0) return SeverityLevel::Moderate;
  return SeverityLevel::Critical;
}

std::optional<std::pair<std::string, std::string>> split_unit(std::string_view text) {
  std::size_t end = text.size();
  while (end > 0) {
    const char c = text[end - 1];
    if (is_digit(c) || c == ' ') break;
    --end;
  }
  if (end == text.size()) return std::nullopt;  // no suffix
  std::size_t number_end = end;
  if (number_end > 0 && text[number_end - 1] == ' ') --number_end;
  if (number_end == 0 || !is_digit(text[number_end - 1])) return std::nullopt;
  return std::pair{std::string(text.substr(0, number_end)), std::string(text.substr(number_end))};
}

}  // namespace verm::catalog
