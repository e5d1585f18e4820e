#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace verm {

using Json = nlohmann::json;

enum class TaskKind { Chart, Table, Svg };

inline constexpr TaskKind kAllTasks[] = {TaskKind::Chart, TaskKind::Table, TaskKind::Svg};

std::string_view to_string(TaskKind task);
std::optional<TaskKind> parse_task(std::string_view text);
/// Throws DataError on unknown names.
TaskKind task_from_string(std::string_view text);

enum class SeverityLevel { Minor, Moderate, Critical };

std::string_view to_string(SeverityLevel level);
std::optional<SeverityLevel> parse_severity(std::string_view text);

/// Closed error taxonomy for each task, in canonical order.
std::span<const std::string_view> taxonomy(TaskKind task);
bool in_taxonomy(TaskKind task, std::string_view category);

/// Numeric severity scale. Must be non-negative and strictly increasing.
struct SeverityMap {
  double minor = 1.0;
  double moderate = 2.0;
  double critical = 3.0;

  bool valid() const;
  bool operator==(const SeverityMap&) const = default;
};

double severity_value(SeverityLevel level, const SeverityMap& map);

struct ErrorItem {
  std::string category;
  SeverityLevel severity = SeverityLevel::Minor;
  std::string location;
  std::string description;

  bool operator==(const ErrorItem&) const = default;
};

struct DiscrepancyReport {
  TaskKind task = TaskKind::Chart;
  std::map<std::string, int> counts;
  std::vector<ErrorItem> errors;

  /// Builds a consistent report: every taxonomy category gets a count,
  /// zero included.
  static DiscrepancyReport from_errors(TaskKind task, std::vector<ErrorItem> errors);

  bool operator==(const DiscrepancyReport&) const = default;
};

struct ValidationOutcome {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationOutcome validate_report(const DiscrepancyReport& report);

Json to_json(const ErrorItem& item);
Json to_json(const DiscrepancyReport& report);
/// Structural parse only; semantic checks live in validate_report.
/// Throws DataError when fields are missing or mistyped.
DiscrepancyReport report_from_json(const Json& j);
ErrorItem error_item_from_json(const Json& j);

Json to_json(const SeverityMap& map);
SeverityMap severity_map_from_json(const Json& j);

/// Canonical text: sorted keys, shortest round-trip floats, no whitespace.
std::string canonical_dump(const Json& j);

/// Shortest round-trip rendering of a double, as used in templated text.
std::string format_number(double value);

}  // namespace verm
