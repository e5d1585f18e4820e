#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "verm/core/errors.hpp"
#include "verm/core/rng.hpp"
#include "verm/corrupt/sample.hpp"
#include "verm/judge/judge.hpp"
#include "verm/render/render.hpp"
#include "verm/tts/tts.hpp"

using namespace verm;
namespace fx = verm::testing;

namespace {

PairContext context(const StructuredDoc& gt) {
  const RenderResult r = render(gt);
  EXPECT_TRUE(r.success());
  return {gt.task, r.image(), gt};
}

PairInstance corrupted(TaskKind task, int k, std::uint64_t seed) {
  Rng rng(seed);
  const StructuredDoc gt = random_doc(task, rng);
  const auto ops = plan_ops(gt, k, rng);
  return apply_edits(gt, ops);
}

/// Fails on the n-th revision.
class FailingReviser final : public Generator {
 public:
  explicit FailingReviser(StructuredDoc start) : start_(std::move(start)) {}
  StructuredDoc initial(const RasterImage&) override { return start_; }
  StructuredDoc revise(const RasterImage&, const StructuredDoc&, const DiscrepancyReport&) override {
    throw MalformedOutput("no document in answer", "???");
  }

 private:
  StructuredDoc start_;
};

}  // namespace

TEST(Reflection, PerfectStartStopsAtThreshold) {
  const auto gt = fx::three_series_chart();
  OracleJudge judge;
  IdentityReviser gen(gt);
  const ReflectionTrace t = run_reflection(context(gt), gen, judge);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].stop_reason, StopReason::Threshold);
  EXPECT_DOUBLE_EQ(t.steps[0].breakdown.total, 2.0);
}

TEST(Reflection, IdentityReachesFixedPoint) {
  const PairInstance p = corrupted(TaskKind::Chart, 2, 4);
  OracleJudge judge;
  IdentityReviser gen(p.pred_doc);
  const ReflectionTrace t = run_reflection(context(p.gt_doc), gen, judge);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_EQ(t.steps[0].stop_reason, StopReason::FixedPoint);
  EXPECT_EQ(t.steps[0].report.errors.size(), 2u);
  EXPECT_EQ(t.normalizer.scope, "run");
  EXPECT_DOUBLE_EQ(t.normalizer.max_severity, t.steps[0].breakdown.s_verm);
}

class OracleRepair : public ::testing::TestWithParam<std::tuple<TaskKind, int>> {};

TEST_P(OracleRepair, ConvergesInExactlyKRevisions) {
  const auto [task, k] = GetParam();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PairInstance p = corrupted(task, k, seed * 31 + k);
    OracleJudge judge;
    OracleRepairGenerator gen(p.gt_doc, p.pred_doc);
    ReflectionOptions opt;
    opt.rounds = 5;
    const ReflectionTrace t = run_reflection(context(p.gt_doc), gen, judge, opt);
    ASSERT_EQ(t.steps.size(), static_cast<std::size_t>(k) + 1) << "seed " << seed;
    EXPECT_EQ(t.steps.back().stop_reason, StopReason::Threshold);
    EXPECT_DOUBLE_EQ(t.steps.back().breakdown.total, 2.0);
    EXPECT_EQ(t.best_step, t.steps.size() - 1);
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      EXPECT_EQ(t.steps[i].round, static_cast<int>(i));
      EXPECT_EQ(t.steps[i].report.errors.size(), static_cast<std::size_t>(k) - i);
      if (i > 0) EXPECT_GE(t.steps[i].breakdown.total, t.steps[i - 1].breakdown.total);
      if (i + 1 < t.steps.size()) EXPECT_FALSE(t.steps[i].stop_reason.has_value());
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllTasks, OracleRepair,
                         ::testing::Combine(::testing::Values(TaskKind::Chart, TaskKind::Table, TaskKind::Svg),
                                            ::testing::Values(1, 2, 3, 4, 5)));

TEST(Reflection, BudgetStopsEarly) {
  const PairInstance p = corrupted(TaskKind::Table, 3, 8);
  OracleJudge judge;
  OracleRepairGenerator gen(p.gt_doc, p.pred_doc);
  ReflectionOptions opt;
  opt.rounds = 1;
  const ReflectionTrace t = run_reflection(context(p.gt_doc), gen, judge, opt);
  ASSERT_EQ(t.steps.size(), 2u);
  EXPECT_EQ(t.steps.back().stop_reason, StopReason::Budget);
  EXPECT_EQ(t.best_step, 1u);
}

TEST(Reflection, FixedNormalizerIsKept) {
  const PairInstance p = corrupted(TaskKind::Svg, 2, 2);
  OracleJudge judge;
  IdentityReviser gen(p.pred_doc);
  ReflectionOptions opt;
  opt.normalizer = Normalizer{"batch", 100.0, 1e-9};
  const ReflectionTrace t = run_reflection(context(p.gt_doc), gen, judge, opt);
  EXPECT_EQ(t.normalizer, *opt.normalizer);
  EXPECT_GT(t.steps[0].breakdown.r_verm, 0.9);
}

TEST(Reflection, UnrenderableStepScoresZero) {
  const auto gt = fx::two_bar_chart();
  auto bad = gt;
  bad.chart().width = 0;
  OracleJudge judge;
  IdentityReviser gen(bad);
  const ReflectionTrace t = run_reflection(context(gt), gen, judge);
  ASSERT_EQ(t.steps.size(), 1u);
  EXPECT_FALSE(t.steps[0].render_ok);
  EXPECT_FALSE(t.steps[0].render_diagnostic.empty());
  EXPECT_EQ(t.steps[0].breakdown, RewardBreakdown{});
}

TEST(Reflection, FailureCarriesPartialTrace) {
  const PairInstance p = corrupted(TaskKind::Chart, 1, 3);
  OracleJudge judge;
  FailingReviser gen(p.pred_doc);
  try {
    run_reflection(context(p.gt_doc), gen, judge);
    FAIL();
  } catch (const ReflectionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Malformed);
    ASSERT_EQ(e.partial().steps.size(), 1u);
    EXPECT_THROW(std::rethrow_exception(e.cause()), MalformedOutput);
  }
}

TEST(Reflection, JudgeFailureWithoutSpecs) {
  const auto gt = fx::small_table();
  PairContext ctx = context(gt);
  ctx.gt_doc.reset();
  OracleJudge judge;
  IdentityReviser gen(gt);
  try {
    run_reflection(ctx, gen, judge);
    FAIL();
  } catch (const ReflectionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Data);
    EXPECT_TRUE(e.partial().steps.empty());
  }
}

TEST(Reflection, BadOptions) {
  const auto gt = fx::small_svg();
  OracleJudge judge;
  IdentityReviser gen(gt);
  ReflectionOptions opt;
  opt.rounds = 0;
  EXPECT_THROW(run_reflection(context(gt), gen, judge, opt), ConfigError);
  opt = {};
  opt.stop_threshold = 2.5;
  EXPECT_THROW(run_reflection(context(gt), gen, judge, opt), ConfigError);
  opt = {};
  opt.severity = SeverityMap{3.0, 2.0, 1.0};
  EXPECT_THROW(run_reflection(context(gt), gen, judge, opt), ConfigError);
}

TEST(Reflection, Deterministic) {
  const PairInstance p = corrupted(TaskKind::Chart, 3, 12);
  auto run = [&] {
    OracleJudge judge;
    OracleRepairGenerator gen(p.gt_doc, p.pred_doc);
    const ReflectionTrace t = run_reflection(context(p.gt_doc), gen, judge);
    Json all = Json::array();
    for (const auto& s : t.steps) all.push_back(to_json(s));
    return all;
  };
  EXPECT_EQ(run(), run());
}

TEST(Reflection, WriteTrace) {
  const PairInstance p = corrupted(TaskKind::Table, 2, 6);
  OracleJudge judge;
  OracleRepairGenerator gen(p.gt_doc, p.pred_doc);
  const ReflectionTrace t = run_reflection(context(p.gt_doc), gen, judge);
  const auto dir = fx::scratch_dir("trace");
  const auto lines = write_trace(t, dir, "inst");
  ASSERT_EQ(lines.size(), t.steps.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Json j = Json::parse(lines[i]);
    EXPECT_EQ(j["png"], "inst_round" + std::to_string(i) + ".png");
    EXPECT_TRUE(std::filesystem::exists(dir / j["png"].get<std::string>()));
    EXPECT_EQ(j["best"], i == t.best_step);
  }
  std::filesystem::remove_all(dir);
}

TEST(DocAnswer, ParsesEmbeddedObject) {
  const auto d = fx::small_table();
  const std::string text = "Here it is:\n```json\n" + canonical_serialize(d) + "\n```\nDone.";
  EXPECT_EQ(parse_doc_answer(text, TaskKind::Table), d);
  EXPECT_THROW(parse_doc_answer(text, TaskKind::Chart), MalformedOutput);
  EXPECT_THROW(parse_doc_answer("no json here", TaskKind::Table), MalformedOutput);
  EXPECT_FALSE(doc_schema(TaskKind::Svg).empty());
}

TEST(DocAnswer, FillsMissingTask) {
  const auto d = fx::two_bar_chart();
  Json j = to_json(d);
  j.erase("task");
  EXPECT_EQ(parse_doc_answer(j.dump(), TaskKind::Chart), d);
}
