#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "verm/core/report.hpp"

namespace verm::catalog {

// Location templates. The corruptor and the oracle judge both build
// ErrorItem locations through these, which is what lets an exact matcher
// align them.
std::string series_colors(int a, int b);
std::string series_color(int i);
std::string series_values(int i);
std::string series_point(int i, int j);
std::string series_type(int i);
std::string series_label(int i);
std::string series_slot(int i);
std::string tick(int i);
std::string cell(int row, int col);
std::string columns(int a, int b);
std::string column_alignment(int c);
std::string primitive(std::string_view id);
std::string group(int g);
inline constexpr std::string_view kTitle = "title";
inline constexpr std::string_view kLegend = "legend";
inline constexpr std::string_view kAxes = "axes";
inline constexpr std::string_view kCanvas = "canvas";
inline constexpr std::string_view kTableShape = "table shape";
inline constexpr std::string_view kBorder = "canvas border";
inline constexpr std::string_view kLayerOrder = "layer order";

inline constexpr std::string_view kBorderId = "border";

// Grading rules for magnitude-dependent operators.
SeverityLevel grade_scale(double factor);
SeverityLevel grade_value_change(double before, double after);
SeverityLevel grade_displacement(double max_abs_delta);

/// Splits "12.5 kg" into {"12.5", " kg"} and "45%" into {"45", "%"}.
/// Nullopt when the text is not a number followed by a unit suffix.
std::optional<std::pair<std::string, std::string>> split_unit(std::string_view text);

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace verm::catalog
