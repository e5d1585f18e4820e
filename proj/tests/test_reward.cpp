#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "verm/core/errors.hpp"
#include "verm/corrupt/ops.hpp"
#include "verm/reward/reward.hpp"

using namespace verm;
namespace fx = verm::testing;

namespace {

ErrorItem item(std::string cat, SeverityLevel sev, std::string loc = "x") {
  return {std::move(cat), sev, std::move(loc), "d"};
}

DiscrepancyReport chart_report(std::vector<ErrorItem> items) {
  return DiscrepancyReport::from_errors(TaskKind::Chart, std::move(items));
}

}  // namespace

TEST(Reward, SeveritySumUsesMap) {
  const auto rep = chart_report({item("text_error", SeverityLevel::Minor, "title"),
                                 item("data_error", SeverityLevel::Critical, "series[0]")});
  EXPECT_DOUBLE_EQ(severity_sum(rep, SeverityMap{}), 4.0);
  EXPECT_DOUBLE_EQ(severity_sum(rep, SeverityMap{0.5, 1.0, 5.0}), 5.5);
  EXPECT_DOUBLE_EQ(severity_sum(chart_report({}), SeverityMap{}), 0.0);
}

TEST(Reward, FitTakesMaximum) {
  const std::vector<double> sums{3.0, 1.0, 7.0, 0.0};
  const Normalizer n = fit_normalizer(sums, 1e-6, "group");
  EXPECT_DOUBLE_EQ(n.max_severity, 7.0);
  EXPECT_DOUBLE_EQ(n.epsilon, 1e-6);
  EXPECT_EQ(n.scope, "group");
  EXPECT_THROW(fit_normalizer(std::vector<double>{}), DataError);
  EXPECT_THROW(fit_normalizer(std::vector<double>{-1.0}), DataError);
  EXPECT_THROW(fit_normalizer(std::vector<double>{1.0}, 0.0), DataError);
  EXPECT_THROW(fit_normalizer(std::vector<double>{std::numeric_limits<double>::infinity()}), DataError);
}

TEST(Reward, VermRewardFormula) {
  const Normalizer n{"batch", 6.0, 1e-9};
  EXPECT_DOUBLE_EQ(verm_reward(0.0, n), 1.0);
  EXPECT_NEAR(verm_reward(3.0, n), 1.0 - 3.0 / (6.0 + 1e-9), 1e-15);
  EXPECT_NEAR(verm_reward(6.0, n), 1.0 - 6.0 / (6.0 + 1e-9), 1e-15);
  EXPECT_GT(verm_reward(6.0, n), 0.0);
  EXPECT_DOUBLE_EQ(verm_reward(9.0, n), 0.0);
  EXPECT_DOUBLE_EQ(verm_reward(0.0, Normalizer{"batch", 0.0, 1e-9}), 1.0);
}

TEST(Reward, CombinedSuccess) {
  const auto rep = chart_report({item("text_error", SeverityLevel::Moderate, "title"),
                                 item("style_error", SeverityLevel::Minor, "legend")});
  const Normalizer n{"batch", 6.0, 1e-9};
  const RewardBreakdown b = combined_reward(true, JudgeVerdict{rep, std::nullopt}, n, SeverityMap{});
  EXPECT_DOUBLE_EQ(b.s_verm, 3.0);
  EXPECT_NEAR(b.s_norm, 0.5, 1e-9);
  EXPECT_NEAR(b.r_verm, 0.5, 1e-9);
  EXPECT_DOUBLE_EQ(b.r_rsr, 1.0);
  EXPECT_DOUBLE_EQ(b.total, b.r_verm + b.r_rsr);
  EXPECT_NEAR(b.r_verm, std::clamp(1.0 - b.s_norm, 0.0, 1.0), 1e-15);
}

TEST(Reward, CombinedPerfect) {
  const RewardBreakdown b =
      combined_reward(true, JudgeVerdict{chart_report({}), std::nullopt}, Normalizer{"batch", 4.0}, SeverityMap{});
  EXPECT_EQ(b, (RewardBreakdown{0.0, 0.0, 1.0, 1.0, 2.0}));
}

TEST(Reward, RenderFailureIgnoresVerdict) {
  const auto rep = chart_report({item("text_error", SeverityLevel::Critical, "title")});
  const RewardBreakdown b = combined_reward(false, JudgeVerdict{rep, std::nullopt}, Normalizer{"batch", 3.0}, SeverityMap{});
  EXPECT_EQ(b, RewardBreakdown{});
  EXPECT_EQ(combined_reward(false, std::nullopt, Normalizer{"batch", 3.0}, SeverityMap{}), RewardBreakdown{});
}

TEST(Reward, MissingVerdictOnSuccessThrows) {
  EXPECT_THROW(combined_reward(true, std::nullopt, Normalizer{"batch", 3.0}, SeverityMap{}), DataError);
}

TEST(Reward, BreakdownJsonRoundTrip) {
  const RewardBreakdown b{3.0, 0.5, 0.5, 1.0, 1.5};
  EXPECT_EQ(breakdown_from_json(to_json(b)), b);
  const Json j = to_json(b);
  for (const char* k : {"s_verm", "s_norm", "r_verm", "r_rsr", "total"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(to_json(Normalizer{"batch", 2.0, 1e-9})["max_severity"], 2.0);
}

TEST(Reward, ScopeNames) {
  EXPECT_EQ(norm_scope_from_string("group"), NormScope::Group);
  EXPECT_EQ(norm_scope_from_string("batch"), NormScope::Batch);
  EXPECT_EQ(to_string(NormScope::Batch), "batch");
  EXPECT_THROW(norm_scope_from_string("global"), ConfigError);
}

TEST(Levenshtein, KnownDistances) {
  EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
  EXPECT_EQ(levenshtein("", "abc"), 3u);
  EXPECT_EQ(levenshtein("abc", ""), 3u);
  EXPECT_EQ(levenshtein("flaw", "lawn"), 2u);
  EXPECT_EQ(levenshtein("same", "same"), 0u);
  EXPECT_EQ(levenshtein("ab", "ba"), 2u);
}

TEST(TextBaseline, IdentityAndRange) {
  const auto gt = fx::three_series_chart();
  EXPECT_DOUBLE_EQ(text_baseline_reward(gt, gt), 1.0);
  auto pred = gt;
  ErrorItem unused = apply_op(pred, catalog_op(pred, OpKind::Retitle, {}, OpParams{.text = "Quarterly Sale"}));
  (void)unused;
  const double r = text_baseline_reward(pred, gt);
  EXPECT_GT(r, 0.95);
  EXPECT_LT(r, 1.0);
  EXPECT_THROW(text_baseline_reward(fx::small_table(), gt), DataError);
}
