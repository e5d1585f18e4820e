#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "verm/app/config.hpp"
#include "verm/corrupt/ops.hpp"
#include "verm/judge/judge.hpp"
#include "verm/render/plugin.hpp"
#include "verm/score/match.hpp"

namespace verm {

/// Built-in rendering, or the sidecar pool for docs that carry raw code
/// when one is configured.
class DocRenderer {
 public:
  explicit DocRenderer(const std::optional<SidecarConfig>& sidecar);
  RenderResult render(const StructuredDoc& doc);

 private:
  std::unique_ptr<SidecarPool> pool_;
};

enum class JudgeKind { Oracle, Remote, Coarse };
enum class MatcherKind { Exact, Remote };
enum class GeneratorKind { OracleRepair, Identity, Remote };

JudgeKind judge_kind_from_string(std::string_view text);
MatcherKind matcher_kind_from_string(std::string_view text);
GeneratorKind generator_kind_from_string(std::string_view text);

/// Throws ConfigError for the coarse kind (it produces no reports) and for
/// remote kinds without an endpoint.
std::unique_ptr<Judge> make_judge(const HarnessConfig& cfg, JudgeKind kind, const std::atomic<bool>* cancel);
std::unique_ptr<Matcher> make_matcher(const HarnessConfig& cfg, MatcherKind kind, const std::atomic<bool>* cancel);

struct GenRequest {
  TaskKind task = TaskKind::Chart;
  int n = 10;
  std::filesystem::path out_dir;
  std::optional<StructuredDoc> doc;                 // corrupt this doc instead of random ones
  std::optional<std::vector<CorruptionOp>> plan;    // fixed ops instead of sampled ones
};

/// Writes docs/, images/, manifest.jsonl, sft.jsonl and corpus.json under
/// out_dir. Returns {"written", "skipped", "digest"}; the digest covers
/// ids, canonical docs, reports and image content hashes, not PNG bytes.
Json gen_corpus(const HarnessConfig& cfg, const GenRequest& req);

/// One JSON line per manifest entry with its report or failure. The
/// coarse kind emits a similarity instead of a report.
std::vector<std::string> run_judge(const HarnessConfig& cfg, const std::filesystem::path& manifest, JudgeKind kind,
                                   const std::atomic<bool>* cancel);

/// One JSON line per entry with its RewardBreakdown. Predictions with a
/// pred_doc are re-rendered; a failed render scores zero. Normalizers are
/// fitted per task (batch scope) or per ground truth (group scope).
std::vector<std::string> run_reward(const HarnessConfig& cfg, const std::filesystem::path& manifest, JudgeKind kind,
                                    const std::atomic<bool>* cancel);

Json run_score(const HarnessConfig& cfg, const std::filesystem::path& manifest, JudgeKind judge,
               MatcherKind matcher, const std::atomic<bool>* cancel);

/// Reflection runs from each entry's pred_doc. Traces and per-round PNGs
/// go to out_dir; returns one summary line per entry.
std::vector<std::string> run_tts(const HarnessConfig& cfg, const std::filesystem::path& manifest,
                                 GeneratorKind gen, JudgeKind judge, const std::filesystem::path& out_dir,
                                 const std::atomic<bool>* cancel);

/// Corpus from the manifest's gt docs, or n random docs of `task`.
Json run_rl_sim(const HarnessConfig& cfg, const std::optional<std::filesystem::path>& manifest, TaskKind task, int n,
                JudgeKind judge, const std::atomic<bool>* cancel);

struct ValidationSummary {
  std::string kind;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

Json to_json(const ValidationSummary& v);

/// Schema and consistency checks for anything the harness reads or
/// writes: a corpus directory, a manifest or SFT JSONL file, or a doc,
/// report, plan or config JSON file.
ValidationSummary validate_path(const std::filesystem::path& path);

}  // namespace verm
