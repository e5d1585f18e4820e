#include "verm/core/report.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "verm/core/errors.hpp"

namespace verm {

namespace {

constexpr std::array<std::string_view, 4> kChartCategories = {
    "structure_error", "data_error", "text_error", "style_error"};
constexpr std::array<std::string_view, 3> kTableCategories = {
    "layout_error", "text_error", "numeric_error"};
constexpr std::array<std::string_view, 4> kSvgCategories = {
    "shape_error", "style_error", "structure_error", "text_symbol_error"};

const Json& require(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw DataError(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

std::string require_string(const Json& j, const char* key, const char* what) {
  const Json& v = require(j, key, what);
  if (!v.is_string()) throw DataError(std::string(what) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

std::string_view to_string(TaskKind task) {
  switch (task) {
    case TaskKind::Chart: return "chart";
    case TaskKind::Table: return "table";
    case TaskKind::Svg: return "svg";
  }
  return "chart";
}

std::optional<TaskKind> parse_task(std::string_view text) {
  for (TaskKind t : kAllTasks)
    if (to_string(t) == text) return t;
  return std::nullopt;
}

TaskKind task_from_string(std::string_view text) {
  auto t = parse_task(text);
  if (!t) throw DataError("unknown task '" + std::string(text) + "'");
  return *t;
}

std::string_view to_string(SeverityLevel level) {
  switch (level) {
    case SeverityLevel::Minor: return "minor";
    case SeverityLevel::Moderate: return "moderate";
    case SeverityLevel::Critical: return "critical";
  }
  return "minor";
}

std::optional<SeverityLevel> parse_severity(std::string_view text) {
  if (text == "minor") return SeverityLevel::Minor;
  if (text == "moderate") return SeverityLevel::Moderate;
  if (text == "critical") return SeverityLevel::Critical;
  return std::nullopt;
}

std::span<const std::string_view> taxonomy(TaskKind task) {
  switch (task) {
    case TaskKind::Chart: return kChartCategories;
    case TaskKind::Table: return kTableCategories;
    case TaskKind::Svg: return kSvgCategories;
  }
  return {};
}

bool in_taxonomy(TaskKind task, std::string_view category) {
  for (auto c : taxonomy(task))
    if (c == category) return true;
  return false;
}

bool SeverityMap::valid() const {
  return std::isfinite(minor) && std::isfinite(critical) && minor >= 0.0 && minor < moderate &&
         moderate < critical;
}

double severity_value(SeverityLevel level, const SeverityMap& map) {
  switch (level) {
    case SeverityLevel::Minor: return map.minor;
    case SeverityLevel::Moderate: return map.moderate;
    case SeverityLevel::Critical: return map.critical;
  }
  return 0.0;
}

DiscrepancyReport DiscrepancyReport::from_errors(TaskKind task, std::vector<ErrorItem> errors) {
  DiscrepancyReport r;
  r.task = task;
  for (auto c : taxonomy(task)) r.counts[std::string(c)] = 0;
  for (const auto& e : errors) ++r.counts[e.category];
  r.errors = std::move(errors);
  return r;
}

ValidationOutcome validate_report(const DiscrepancyReport& report) {
  ValidationOutcome out;
  std::map<std::string, int> tally;
  for (std::size_t i = 0; i < report.errors.size(); ++i) {
    const ErrorItem& e = report.errors[i];
    const std::string at = "errors[" + std::to_string(i) + "]";
    if (!in_taxonomy(report.task, e.category))
      out.violations.push_back(at + ": unknown category '" + e.category + "' for task " +
                               std::string(to_string(report.task)));
    if (e.location.empty()) out.violations.push_back(at + ": empty location");
    if (e.description.empty()) out.violations.push_back(at + ": empty description");
    ++tally[e.category];
  }
  for (const auto& [category, count] : report.counts) {
    if (!in_taxonomy(report.task, category))
      out.violations.push_back("counts: unknown category '" + category + "'");
    if (count < 0) out.violations.push_back("counts: negative count for " + category);
  }
  // Every category seen on either side must agree; absent keys count as 0.
  std::map<std::string, int> keys = tally;
  for (const auto& [category, count] : report.counts) keys.emplace(category, 0);
  for (const auto& [category, unused] : keys) {
    const auto c = report.counts.find(category);
    const int declared = c == report.counts.end() ? 0 : c->second;
    const auto t = tally.find(category);
    const int listed = t == tally.end() ? 0 : t->second;
    if (declared != listed)
      out.violations.push_back("counts mismatch: " + category + " " + std::to_string(declared) +
                               " != " + std::to_string(listed));
  }
  return out;
}

Json to_json(const ErrorItem& item) {
  return Json{{"category", item.category},
              {"severity", std::string(to_string(item.severity))},
              {"location", item.location},
              {"description", item.description}};
}

Json to_json(const DiscrepancyReport& report) {
  Json errors = Json::array();
  for (const auto& e : report.errors) errors.push_back(to_json(e));
  Json counts = Json::object();
  for (const auto& [k, v] : report.counts) counts[k] = v;
  return Json{{"task", std::string(to_string(report.task))}, {"counts", counts}, {"errors", errors}};
}

ErrorItem error_item_from_json(const Json& j) {
  ErrorItem e;
  e.category = require_string(j, "category", "error item");
  const std::string sev = require_string(j, "severity", "error item");
  auto level = parse_severity(sev);
  if (!level) throw DataError("error item: unknown severity '" + sev + "'");
  e.severity = *level;
  e.location = require_string(j, "location", "error item");
  e.description = require_string(j, "description", "error item");
  return e;
}

DiscrepancyReport report_from_json(const Json& j) {
  DiscrepancyReport r;
  r.task = task_from_string(require_string(j, "task", "report"));
  const Json& counts = require(j, "counts", "report");
  if (!counts.is_object()) throw DataError("report: 'counts' must be an object");
  for (const auto& [k, v] : counts.items()) {
    if (!v.is_number_integer()) throw DataError("report: count for '" + k + "' must be an integer");
    r.counts[k] = v.get<int>();
  }
  const Json& errors = require(j, "errors", "report");
  if (!errors.is_array()) throw DataError("report: 'errors' must be an array");
  for (const auto& e : errors) r.errors.push_back(error_item_from_json(e));
  return r;
}

Json to_json(const SeverityMap& map) {
  return Json{{"minor", map.minor}, {"moderate", map.moderate}, {"critical", map.critical}};
}

SeverityMap severity_map_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("severity_map must be an object");
  SeverityMap m;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw ConfigError("severity_map." + k + " must be a number");
    if (k == "minor") m.minor = v.get<double>();
    else if (k == "moderate") m.moderate = v.get<double>();
    else if (k == "critical") m.critical = v.get<double>();
    else throw ConfigError("severity_map: unknown key '" + k + "'");
  }
  if (!m.valid())
    throw ConfigError("severity_map must be non-negative and strictly increasing");
  return m;
}

std::string canonical_dump(const Json& j) { return j.dump(); }

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace verm
