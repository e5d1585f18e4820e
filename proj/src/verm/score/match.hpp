#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "verm/core/report.hpp"
#include "verm/judge/remote.hpp"

namespace verm {

enum class MatchLevel { Yes, Partial };

std::string_view to_string(MatchLevel level);

struct MatchDecision {
  std::size_t pred = 0;
  std::size_t gt = 0;
  MatchLevel level = MatchLevel::Yes;
  bool operator==(const MatchDecision&) const = default;
};

struct MatchResult {
  std::vector<MatchDecision> decisions;
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gt;
  bool operator==(const MatchResult&) const = default;
};

Json to_json(const MatchResult& r);

/// Checks that the three sets partition both sides and that every
/// decision pairs items of one category. Empty when valid.
std::vector<std::string> match_violations(const MatchResult& r, const DiscrepancyReport& pred,
                                          const DiscrepancyReport& gt);

/// Builds a result from decisions alone, filling the unmatched lists.
MatchResult complete_match(std::vector<MatchDecision> decisions, std::size_t n_pred, std::size_t n_gt);

/// Implementations must be safe to call from several threads at once.
class Matcher {
 public:
  virtual ~Matcher() = default;
  virtual MatchResult match(const DiscrepancyReport& pred, const DiscrepancyReport& gt) = 0;
  virtual std::string name() const = 0;
};

/// "yes" exactly when category, severity and location are equal; never
/// emits "partial".
class ExactMatcher final : public Matcher {
 public:
  MatchResult match(const DiscrepancyReport& pred, const DiscrepancyReport& gt) override;
  std::string name() const override { return "exact"; }
};

/// Asks a chat endpoint with the match_eval prompt and validates the
/// answer. Throws MalformedOutput when no valid answer arrives within
/// the parse retries.
class RemoteMatcher final : public Matcher {
 public:
  RemoteMatcher(RemoteEndpointConfig cfg, const std::filesystem::path& prompt_dir,
                const std::atomic<bool>* cancel = nullptr);
  MatchResult match(const DiscrepancyReport& pred, const DiscrepancyReport& gt) override;
  std::string name() const override { return "remote"; }

 private:
  ChatClient client_;
  std::string prompt_;
};

/// Reads {"matches": [...]} from a matcher answer and validates it.
/// Throws MalformedOutput.
MatchResult parse_match_answer(std::string_view text, const DiscrepancyReport& pred, const DiscrepancyReport& gt);

/// Throws DataError when the reports belong to different tasks.
MatchResult match_errors(const DiscrepancyReport& pred, const DiscrepancyReport& gt, Matcher& matcher);

enum class Regime { Hard, Soft };

struct MatchCounts {
  std::size_t tp_hard = 0;
  std::size_t tp_soft = 0;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;

  MatchCounts& operator+=(const MatchCounts& o);
  bool operator==(const MatchCounts&) const = default;
};

MatchCounts count_matches(const MatchResult& r);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Prf prf1(const MatchCounts& counts, Regime regime);
inline Prf prf1(const MatchResult& r, Regime regime) { return prf1(count_matches(r), regime); }

/// Product-moment correlation; nullopt when either side has zero
/// variance. Throws DataError on empty or unequal inputs.
std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace verm
