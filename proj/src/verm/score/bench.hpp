#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verm/core/doc.hpp"
#include "verm/core/errors.hpp"
#include "verm/core/report.hpp"
#include "verm/judge/judge.hpp"
#include "verm/score/match.hpp"

namespace verm {

/// One benchmark instance. Paths are relative to the manifest directory.
struct ManifestEntry {
  std::string id;
  TaskKind task = TaskKind::Chart;
  std::string gt_png;
  std::string pred_png;
  DiscrepancyReport gt_report;
  std::optional<std::string> gt_doc;
  std::optional<std::string> pred_doc;
  bool operator==(const ManifestEntry&) const = default;
};

/// Optional first manifest line: {"manifest": {"stats": {...}, "total": N,
/// "profile": name}}.
struct ManifestHeader {
  std::map<TaskKind, std::size_t> stats;
  std::size_t total = 0;
  std::optional<std::string> profile;
  bool operator==(const ManifestHeader&) const = default;
};

struct BenchManifest {
  std::optional<ManifestHeader> header;
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;
};

Json to_json(const ManifestEntry& e);
ManifestEntry manifest_entry_from_json(const Json& j);
Json to_json(const ManifestHeader& h);
ManifestHeader manifest_header_from_json(const Json& j);

/// Parses JSONL text. Throws DataError naming the offending line.
BenchManifest parse_manifest(std::string_view text, std::filesystem::path base_dir = {});
BenchManifest load_manifest(const std::filesystem::path& path);
std::string dump_manifest(const BenchManifest& m);

/// Declared per-task counts of a named benchmark, if known.
std::optional<std::map<TaskKind, std::size_t>> stats_profile(std::string_view name);

/// Header checks: the per-task counts add up to the declared total, match
/// the named profile if any, and match the entries when there are any.
/// Entry checks: unique ids and valid gt reports. Empty when valid.
std::vector<std::string> manifest_violations(const BenchManifest& m);

/// Loads images and attached docs for one entry. Throws DataError.
JudgeInput load_judge_input(const BenchManifest& m, const ManifestEntry& e);

struct TaskMetrics {
  Prf hard;
  Prf soft;
  std::optional<double> s_c;
  std::size_t n = 0;
  std::size_t failures = 0;
  MatchCounts counts;
};

struct InstanceScore {
  std::string id;
  TaskKind task = TaskKind::Chart;
  std::optional<DiscrepancyReport> pred_report;
  std::optional<MatchResult> match;
  double pred_sum = 0.0;
  double gt_sum = 0.0;
  std::optional<ErrorKind> error_kind;
  std::string error;
};

struct BenchMetrics {
  std::map<TaskKind, TaskMetrics> per_task;
  TaskMetrics aggregate;
  std::vector<InstanceScore> instances;
};

/// {"averaging": "micro", "tasks": {...}, "aggregate": {...}}
Json to_json(const BenchMetrics& m);
Json to_json(const TaskMetrics& m);

struct ScoreOptions {
  std::size_t max_parallel = 1;
  double max_failure_share = 0.10;
};

/// Judges and matches every entry, pooling match counts per task and
/// overall. Failed instances are excluded and counted; a failure share
/// above max_failure_share throws AbortedError.
BenchMetrics score_benchmark(const BenchManifest& manifest, Judge& judge, Matcher& matcher, const SeverityMap& map,
                             const ScoreOptions& options = {});

}  // namespace verm
