#pragma once

#include <atomic>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "verm/core/doc.hpp"
#include "verm/core/errors.hpp"
#include "verm/core/report.hpp"
#include "verm/judge/judge.hpp"
#include "verm/judge/remote.hpp"
#include "verm/render/raster.hpp"
#include "verm/reward/reward.hpp"

namespace verm {

inline constexpr int kDefaultRounds = 3;
inline constexpr double kDefaultStopThreshold = 2.0;

/// The policy being refined. Implementations must be deterministic for a
/// fixed configuration.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual StructuredDoc initial(const RasterImage& gt_image) = 0;
  virtual StructuredDoc revise(const RasterImage& gt_image, const StructuredDoc& prev,
                               const DiscrepancyReport& feedback) = 0;
};

/// Starts from a fixed doc and never changes it.
class IdentityReviser final : public Generator {
 public:
  explicit IdentityReviser(StructuredDoc start) : start_(std::move(start)) {}
  StructuredDoc initial(const RasterImage&) override { return start_; }
  StructuredDoc revise(const RasterImage&, const StructuredDoc& prev, const DiscrepancyReport&) override {
    return prev;
  }

 private:
  StructuredDoc start_;
};

/// Starts from a fixed doc and restores the highest-severity reported
/// error (the first one on ties) from the ground truth on every revision.
class OracleRepairGenerator final : public Generator {
 public:
  OracleRepairGenerator(StructuredDoc gt, StructuredDoc start) : gt_(std::move(gt)), start_(std::move(start)) {}
  StructuredDoc initial(const RasterImage&) override { return start_; }
  StructuredDoc revise(const RasterImage& gt_image, const StructuredDoc& prev,
                       const DiscrepancyReport& feedback) override;

 private:
  StructuredDoc gt_;
  StructuredDoc start_;
};

/// Asks a chat endpoint for a doc, using the generate_initial and
/// generate_revise prompts.
class RemoteGenerator final : public Generator {
 public:
  RemoteGenerator(TaskKind task, RemoteEndpointConfig cfg, const std::filesystem::path& prompt_dir,
                  const std::atomic<bool>* cancel = nullptr);
  StructuredDoc initial(const RasterImage& gt_image) override;
  StructuredDoc revise(const RasterImage& gt_image, const StructuredDoc& prev,
                       const DiscrepancyReport& feedback) override;

 private:
  StructuredDoc ask(const std::string& prompt, const RasterImage& gt_image);

  TaskKind task_;
  ChatClient client_;
  std::string initial_prompt_;
  std::string revise_prompt_;
};

/// Pulls the first JSON object in `text` that parses as a valid doc of
/// `task`. Throws MalformedOutput otherwise.
StructuredDoc parse_doc_answer(std::string_view text, TaskKind task);

/// Short field listing of the doc JSON for one task, for prompts.
std::string doc_schema(TaskKind task);

enum class StopReason { Threshold, FixedPoint, Budget };

std::string_view to_string(StopReason reason);

struct ReflectionStep {
  int round = 0;
  StructuredDoc doc;
  bool render_ok = false;
  std::string render_diagnostic;
  std::optional<RasterImage> image;
  DiscrepancyReport report;
  RewardBreakdown breakdown;
  std::optional<StopReason> stop_reason;  // set on the final step only
};

struct ReflectionTrace {
  std::vector<ReflectionStep> steps;
  Normalizer normalizer;
  std::size_t best_step = 0;  // maximal total, earliest on ties
};

/// Ground truth seen by the loop: the target image, plus the source doc when an
/// oracle judge is used.
struct PairContext {
  TaskKind task = TaskKind::Chart;
  RasterImage gt_image;
  std::optional<StructuredDoc> gt_doc;
};

struct ReflectionOptions {
  int rounds = kDefaultRounds;
  double stop_threshold = kDefaultStopThreshold;
  SeverityMap severity;
  double epsilon = kDefaultEpsilon;
  /// Fixed normalizer. When unset, one is fitted on the severity sum of
  /// the first judged step and reused for the rest of the run.
  std::optional<Normalizer> normalizer;
};

/// Thrown when the generator or judge fails mid-run. Carries the steps
/// completed so far and the original failure.
class ReflectionError : public Error {
 public:
  ReflectionError(ErrorKind kind, const std::string& what, ReflectionTrace partial, std::exception_ptr cause)
      : Error(kind, what), partial_(std::move(partial)), cause_(std::move(cause)) {}
  const ReflectionTrace& partial() const noexcept { return partial_; }
  std::exception_ptr cause() const noexcept { return cause_; }

 private:
  ReflectionTrace partial_;
  std::exception_ptr cause_;
};

/// generate, render, judge, feed back, until the total reaches the
/// threshold, the generator stops changing the doc, or `rounds` revisions
/// have been made. Throws ConfigError on bad options.
ReflectionTrace run_reflection(const PairContext& gt, Generator& gen, Judge& judge,
                               const ReflectionOptions& options = {});

Json to_json(const ReflectionStep& step);

/// Writes <prefix>_round<t>.png for each rendered step into `dir` and
/// returns one JSON line per step, each naming its PNG relative to `dir`.
std::vector<std::string> write_trace(const ReflectionTrace& trace, const std::filesystem::path& dir,
                                     std::string_view prefix);

}  // namespace verm
