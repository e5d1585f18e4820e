#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "verm/core/doc.hpp"
#include "verm/core/report.hpp"
#include "verm/judge/judge.hpp"

namespace verm {

inline constexpr double kDefaultEpsilon = 1e-9;

/// Which severity sums a normalizer is fitted over.
enum class NormScope { Group, Batch };

std::string_view to_string(NormScope scope);
/// Throws ConfigError on anything but "group" or "batch".
NormScope norm_scope_from_string(std::string_view text);

struct Normalizer {
  std::string scope;
  double max_severity = 0.0;
  double epsilon = kDefaultEpsilon;
  bool operator==(const Normalizer&) const = default;
};

struct RewardBreakdown {
  double s_verm = 0.0;
  double s_norm = 0.0;
  double r_verm = 0.0;
  double r_rsr = 0.0;
  double total = 0.0;
  bool operator==(const RewardBreakdown&) const = default;
};

Json to_json(const RewardBreakdown& b);
RewardBreakdown breakdown_from_json(const Json& j);
Json to_json(const Normalizer& n);

double severity_sum(const DiscrepancyReport& report, const SeverityMap& map);

/// Throws DataError on an empty list, a negative or non-finite sum, or a
/// non-positive epsilon.
Normalizer fit_normalizer(std::span<const double> sums, double epsilon = kDefaultEpsilon,
                          std::string scope = "batch");

double verm_reward(double s, const Normalizer& norm);

/// A failed render scores zero throughout and ignores any verdict. A
/// successful one without a verdict throws DataError.
RewardBreakdown combined_reward(bool render_ok, const std::optional<JudgeVerdict>& verdict,
                                const Normalizer& norm, const SeverityMap& map);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// Edit-distance similarity of the canonical serializations. Throws
/// DataError when the docs belong to different tasks.
double text_baseline_reward(const StructuredDoc& pred, const StructuredDoc& gt);

}  // namespace verm
