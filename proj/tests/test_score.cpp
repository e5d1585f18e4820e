#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>

#include "fixtures.hpp"
#include "verm/core/errors.hpp"
#include "verm/core/rng.hpp"
#include "verm/corrupt/sample.hpp"
#include "verm/judge/judge.hpp"
#include "verm/render/codec.hpp"
#include "verm/render/render.hpp"
#include "verm/score/bench.hpp"
#include "verm/score/match.hpp"

using namespace verm;
namespace fx = verm::testing;

namespace {

ErrorItem item(std::string cat, SeverityLevel sev, std::string loc) { return {std::move(cat), sev, std::move(loc), ""}; }

DiscrepancyReport chart(std::vector<ErrorItem> items) {
  return DiscrepancyReport::from_errors(TaskKind::Chart, std::move(items));
}

const ErrorItem kTitle = item("text_error", SeverityLevel::Moderate, "title");
const ErrorItem kTick = item("text_error", SeverityLevel::Minor, "tick[1]");
const ErrorItem kColor = item("style_error", SeverityLevel::Minor, "series[0].color");
const ErrorItem kData = item("data_error", SeverityLevel::Critical, "series[1].values");
const ErrorItem kKind = item("structure_error", SeverityLevel::Critical, "series[2].type");
const ErrorItem kLegend = item("structure_error", SeverityLevel::Moderate, "legend");

class EmptyJudge final : public Judge {
 public:
  JudgeVerdict judge(const JudgeInput& in) override { return {DiscrepancyReport::from_errors(in.task, {}), {}}; }
  std::string name() const override { return "empty"; }
};

/// Oracle judge that fails its first `fail_first` calls.
class FlakyJudge final : public Judge {
 public:
  explicit FlakyJudge(int fail_first) : left_(fail_first) {}
  JudgeVerdict judge(const JudgeInput& in) override {
    if (left_.fetch_sub(1) > 0) throw MalformedOutput("unusable answer", "{");
    return oracle_judge(in);
  }
  std::string name() const override { return "flaky"; }

 private:
  std::atomic<int> left_;
};

/// Edit-route instances rendered into `dir`, with counts per task.
BenchManifest make_bench(const std::filesystem::path& dir, std::map<TaskKind, int> counts, std::uint64_t seed = 1) {
  BenchManifest m;
  m.base_dir = dir;
  Rng rng(seed);
  int i = 0;
  for (const auto& [task, n] : counts) {
    for (int j = 0; j < n; ++j, ++i) {
      const StructuredDoc gt = random_doc(task, rng);
      const int k = static_cast<int>(rng.range(1, 3));
      const PairInstance p = apply_edits(gt, plan_ops(gt, k, rng));
      ManifestEntry e;
      e.id = std::string(to_string(task)) + "-" + std::to_string(i);
      e.task = task;
      e.gt_png = e.id + "_gt.png";
      e.pred_png = e.id + "_pred.png";
      e.gt_doc = e.id + "_gt.json";
      e.pred_doc = e.id + "_pred.json";
      e.gt_report = p.gt_report;
      write_png(dir / e.gt_png, render(p.gt_doc).image());
      write_png(dir / e.pred_png, render(p.pred_doc).image());
      write_text_file(dir / *e.gt_doc, canonical_serialize(p.gt_doc));
      write_text_file(dir / *e.pred_doc, canonical_serialize(p.pred_doc));
      m.entries.push_back(std::move(e));
    }
  }
  return m;
}

}  // namespace

TEST(Prf, WorkedExample) {
  // 3 predicted, 4 annotated, 2 exact matches.
  const auto pred = chart({kTitle, kColor, kLegend});
  const auto gt = chart({kTitle, kColor, kData, kKind});
  ExactMatcher m;
  const MatchResult r = match_errors(pred, gt, m);
  EXPECT_EQ(count_matches(r), (MatchCounts{2, 2, 3, 4}));
  const Prf p = prf1(r, Regime::Hard);
  EXPECT_NEAR(p.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(p.recall, 0.5, 1e-12);
  EXPECT_NEAR(p.f1, 4.0 / 7.0, 1e-12);
  EXPECT_EQ(r.unmatched_pred, (std::vector<std::size_t>{2}));
  EXPECT_EQ(r.unmatched_gt, (std::vector<std::size_t>{2, 3}));
}

TEST(Prf, PartialCountsOnlyWhenSoft) {
  const MatchResult r = complete_match({{0, 0, MatchLevel::Yes}, {1, 1, MatchLevel::Partial}}, 2, 2);
  const Prf hard = prf1(r, Regime::Hard), soft = prf1(r, Regime::Soft);
  EXPECT_DOUBLE_EQ(hard.precision, 0.5);
  EXPECT_DOUBLE_EQ(hard.recall, 0.5);
  EXPECT_DOUBLE_EQ(hard.f1, 0.5);
  EXPECT_DOUBLE_EQ(soft.precision, 1.0);
  EXPECT_DOUBLE_EQ(soft.f1, 1.0);
}

TEST(Prf, EmptyConventions) {
  Prf p = prf1(MatchCounts{0, 0, 0, 0}, Regime::Hard);
  EXPECT_EQ(std::tuple(p.precision, p.recall, p.f1), std::tuple(1.0, 1.0, 1.0));
  p = prf1(MatchCounts{0, 0, 0, 3}, Regime::Hard);
  EXPECT_EQ(std::tuple(p.precision, p.recall, p.f1), std::tuple(0.0, 0.0, 0.0));
  p = prf1(MatchCounts{0, 0, 2, 0}, Regime::Soft);
  EXPECT_EQ(std::tuple(p.precision, p.recall, p.f1), std::tuple(0.0, 0.0, 0.0));
  p = prf1(MatchCounts{0, 0, 2, 2}, Regime::Hard);
  EXPECT_EQ(p.f1, 0.0);
}

TEST(Prf, SoftDominatesHard) {
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n_pred = rng.range(0, 6), n_gt = rng.range(0, 6);
    std::vector<MatchDecision> d;
    for (std::size_t i = 0; i < std::min(n_pred, n_gt); ++i)
      if (rng.uniform() < 0.7) d.push_back({i, i, rng.uniform() < 0.5 ? MatchLevel::Yes : MatchLevel::Partial});
    const MatchResult r = complete_match(d, n_pred, n_gt);
    const Prf h = prf1(r, Regime::Hard), s = prf1(r, Regime::Soft);
    EXPECT_LE(h.precision, s.precision);
    EXPECT_LE(h.recall, s.recall);
    EXPECT_LE(h.f1, s.f1);
  }
}

TEST(Prf, MicroAveragingPoolsCounts) {
  MatchCounts total;
  total += MatchCounts{1, 1, 1, 1};
  total += MatchCounts{0, 1, 3, 1};
  EXPECT_EQ(total, (MatchCounts{1, 2, 4, 2}));
  EXPECT_DOUBLE_EQ(prf1(total, Regime::Hard).precision, 0.25);
}

TEST(Match, PermutationInvariantCounts) {
  const std::vector<ErrorItem> gt_items{kTitle, kTick, kColor, kData, kKind};
  const std::vector<ErrorItem> pred_base{kTick, kData, kLegend, kTitle};
  ExactMatcher m;
  const MatchCounts want = count_matches(match_errors(chart(pred_base), chart(gt_items), m));
  EXPECT_EQ(want, (MatchCounts{3, 3, 4, 5}));
  auto pred = pred_base;
  auto gt = gt_items;
  std::sort(pred.begin(), pred.end(), [](auto& a, auto& b) { return a.location < b.location; });
  do {
    std::rotate(gt.begin(), gt.begin() + 1, gt.end());
    EXPECT_EQ(count_matches(match_errors(chart(pred), chart(gt), m)), want);
  } while (std::next_permutation(pred.begin(), pred.end(), [](auto& a, auto& b) { return a.location < b.location; }));
}

TEST(Match, ExactNeedsSeverityAndLocation) {
  ExactMatcher m;
  auto other_sev = kTitle;
  other_sev.severity = SeverityLevel::Critical;
  EXPECT_TRUE(match_errors(chart({other_sev}), chart({kTitle}), m).decisions.empty());
  auto other_desc = kTitle;
  other_desc.description = "reworded";
  EXPECT_EQ(match_errors(chart({other_desc}), chart({kTitle}), m).decisions.size(), 1u);
}

TEST(Match, TaskMismatchThrows) {
  ExactMatcher m;
  EXPECT_THROW(match_errors(chart({}), DiscrepancyReport::from_errors(TaskKind::Svg, {}), m), DataError);
}

TEST(Match, Violations) {
  const auto pred = chart({kTitle, kColor}), gt = chart({kTitle, kData});
  EXPECT_TRUE(match_violations(complete_match({{0, 0, MatchLevel::Yes}}, 2, 2), pred, gt).empty());
  EXPECT_FALSE(match_violations(complete_match({{1, 1, MatchLevel::Partial}}, 2, 2), pred, gt).empty());
  MatchResult dup = complete_match({{0, 0, MatchLevel::Yes}}, 2, 2);
  dup.unmatched_pred.push_back(0);
  EXPECT_FALSE(match_violations(dup, pred, gt).empty());
}

TEST(Match, ParseAnswer) {
  const auto pred = chart({kTitle, kColor}), gt = chart({kTitle, kColor});
  const MatchResult r =
      parse_match_answer(R"(ok {"matches":[{"pred":1,"gt":1,"level":"partial"},{"pred":0,"gt":0,"level":"yes"}]})", pred, gt);
  EXPECT_EQ(count_matches(r), (MatchCounts{1, 2, 2, 2}));
  EXPECT_THROW(parse_match_answer(R"({"matches":[{"pred":0,"gt":1,"level":"yes"}]})", pred, gt), MalformedOutput);
  EXPECT_THROW(parse_match_answer(R"({"matches":[{"pred":0,"gt":0,"level":"maybe"}]})", pred, gt), MalformedOutput);
  EXPECT_THROW(parse_match_answer("nothing", pred, gt), MalformedOutput);
}

TEST(Pearson, Cases) {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1}, c{5, 5, 5, 5};
  EXPECT_NEAR(*pearson(x, y), 1.0, 1e-12);
  EXPECT_NEAR(*pearson(x, z), -1.0, 1e-12);
  EXPECT_FALSE(pearson(x, c).has_value());
  const std::vector<double> a{1, 2, 3}, b{1, 3, 2};
  EXPECT_NEAR(*pearson(a, b), 0.5, 1e-12);
  EXPECT_THROW(pearson(std::vector<double>{}, std::vector<double>{}), DataError);
  EXPECT_THROW(pearson(a, x), DataError);
}

TEST(Manifest, ProfileCounts) {
  const auto p = stats_profile("vc-rewardbench");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->at(TaskKind::Chart), 595u);
  EXPECT_EQ(p->at(TaskKind::Table), 298u);
  EXPECT_EQ(p->at(TaskKind::Svg), 442u);
  EXPECT_FALSE(stats_profile("unknown").has_value());
}

TEST(Manifest, HeaderChecks) {
  BenchManifest m;
  m.header = ManifestHeader{{{TaskKind::Chart, 595}, {TaskKind::Table, 298}, {TaskKind::Svg, 442}}, 1335, "vc-rewardbench"};
  EXPECT_TRUE(manifest_violations(m).empty());
  m.header->stats = {{TaskKind::Chart, 595}, {TaskKind::Table, 442}, {TaskKind::Svg, 298}};
  EXPECT_FALSE(manifest_violations(m).empty());
  m.header->stats = {{TaskKind::Chart, 596}, {TaskKind::Table, 298}, {TaskKind::Svg, 442}};
  EXPECT_FALSE(manifest_violations(m).empty());
  m.header->profile.reset();
  m.header->total = 1336;
  EXPECT_TRUE(manifest_violations(m).empty());
}

TEST(Manifest, EntryChecks) {
  const auto dir = fx::scratch_dir("entries");
  BenchManifest m = make_bench(dir, {{TaskKind::Chart, 2}, {TaskKind::Svg, 1}});
  m.header = ManifestHeader{{{TaskKind::Chart, 2}, {TaskKind::Svg, 1}}, 3, std::nullopt};
  EXPECT_TRUE(manifest_violations(m).empty());
  m.header->stats = {{TaskKind::Chart, 1}, {TaskKind::Svg, 2}};
  EXPECT_FALSE(manifest_violations(m).empty());
  m.header.reset();
  m.entries[1].id = m.entries[0].id;
  EXPECT_FALSE(manifest_violations(m).empty());
  std::filesystem::remove_all(dir);
}

TEST(Manifest, TextRoundTrip) {
  const auto dir = fx::scratch_dir("manifest");
  BenchManifest m = make_bench(dir, {{TaskKind::Table, 2}});
  m.header = ManifestHeader{{{TaskKind::Table, 2}}, 2, std::nullopt};
  const BenchManifest back = parse_manifest(dump_manifest(m), dir);
  EXPECT_EQ(back.header, m.header);
  EXPECT_EQ(back.entries, m.entries);
  EXPECT_THROW(parse_manifest("{\"id\":1}\n"), DataError);
  try {
    parse_manifest(dump_manifest(m) + "not json\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  std::filesystem::remove_all(dir);
}

TEST(Bench, OracleScoresPerfectly) {
  const auto dir = fx::scratch_dir("bench");
  const BenchManifest m = make_bench(dir, {{TaskKind::Chart, 4}, {TaskKind::Table, 4}, {TaskKind::Svg, 4}});
  OracleJudge judge;
  ExactMatcher matcher;
  ScoreOptions opt;
  opt.max_parallel = 3;
  const BenchMetrics r = score_benchmark(m, judge, matcher, SeverityMap{}, opt);
  ASSERT_EQ(r.per_task.size(), 3u);
  EXPECT_DOUBLE_EQ(r.aggregate.hard.f1, 1.0);
  EXPECT_DOUBLE_EQ(r.aggregate.soft.f1, 1.0);
  ASSERT_TRUE(r.aggregate.s_c.has_value());
  EXPECT_NEAR(*r.aggregate.s_c, 1.0, 1e-12);
  EXPECT_EQ(r.aggregate.n, 12u);
  const Json j = to_json(r);
  EXPECT_EQ(j["averaging"], "micro");
  EXPECT_EQ(j["tasks"].size(), 3u);
  std::filesystem::remove_all(dir);
}

TEST(Bench, EmptyJudgeScoresZero) {
  const auto dir = fx::scratch_dir("bench_empty");
  const BenchManifest m = make_bench(dir, {{TaskKind::Chart, 3}});
  EmptyJudge judge;
  ExactMatcher matcher;
  const BenchMetrics r = score_benchmark(m, judge, matcher, SeverityMap{});
  EXPECT_EQ(r.aggregate.hard.precision, 0.0);
  EXPECT_EQ(r.aggregate.hard.recall, 0.0);
  EXPECT_EQ(r.aggregate.soft.f1, 0.0);
  EXPECT_FALSE(r.aggregate.s_c.has_value());
  EXPECT_TRUE(to_json(r)["aggregate"]["s_c"].is_null());
  std::filesystem::remove_all(dir);
}

TEST(Bench, FailuresWithinBudgetAreExcluded) {
  const auto dir = fx::scratch_dir("bench_flaky");
  const BenchManifest m = make_bench(dir, {{TaskKind::Table, 10}});
  FlakyJudge judge(1);
  ExactMatcher matcher;
  const BenchMetrics r = score_benchmark(m, judge, matcher, SeverityMap{});
  EXPECT_EQ(r.aggregate.failures, 1u);
  EXPECT_EQ(r.aggregate.n, 10u);
  EXPECT_DOUBLE_EQ(r.aggregate.hard.f1, 1.0);
  EXPECT_EQ(r.instances[0].error_kind, ErrorKind::Malformed);
  std::filesystem::remove_all(dir);
}

TEST(Bench, TooManyFailuresAbort) {
  const auto dir = fx::scratch_dir("bench_abort");
  const BenchManifest m = make_bench(dir, {{TaskKind::Table, 10}});
  FlakyJudge judge(2);
  ExactMatcher matcher;
  EXPECT_THROW(score_benchmark(m, judge, matcher, SeverityMap{}), AbortedError);
  std::filesystem::remove_all(dir);
}

TEST(Bench, MissingImageIsInstanceFailure) {
  const auto dir = fx::scratch_dir("bench_missing");
  BenchManifest m = make_bench(dir, {{TaskKind::Svg, 1}});
  std::filesystem::remove(dir / m.entries[0].pred_png);
  EXPECT_THROW(load_judge_input(m, m.entries[0]), DataError);
  std::filesystem::remove_all(dir);
}
