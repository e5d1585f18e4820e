#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "verm/core/errors.hpp"
#include "verm/core/rng.hpp"
#include "verm/corrupt/sample.hpp"
#include "verm/judge/judge.hpp"
#include "verm/rlkit/rlkit.hpp"

using namespace verm;
namespace fx = verm::testing;

namespace {

ToyPolicy policy(std::vector<double> p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p.size(); ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return {names, std::move(p)};
}

std::vector<NoiseConfig> levels() {
  NoiseConfig noisy{"noisy", 0.6}, mild{"mild", 0.3}, clean{"clean", 0.0};
  return {noisy, mild, clean};
}

std::vector<StructuredDoc> corpus(TaskKind task, int n) {
  std::vector<StructuredDoc> docs;
  Rng rng(11);
  for (int i = 0; i < n; ++i) docs.push_back(random_doc(task, rng));
  return docs;
}

}  // namespace

TEST(Grpo, WorkedExample) {
  const std::vector<double> r{1.0, 2.0, 3.0, 4.0};
  const double sd = std::sqrt(1.25);
  const auto a = grpo_advantages(r);
  ASSERT_EQ(a.size(), 4u);
  const double expect[] = {-1.5 / sd, -0.5 / sd, 0.5 / sd, 1.5 / sd};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], expect[i], 1e-12);
}

TEST(Grpo, ZeroMeanUnitStd) {
  const std::vector<double> r{0.2, 1.9, 0.0, 1.1, 1.4, 0.7, 2.0, 0.3};
  const auto a = grpo_advantages(r);
  const double mean = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
  double var = 0.0;
  for (double x : a) var += (x - mean) * (x - mean);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(var / a.size()), 1.0, 1e-12);
}

TEST(Grpo, DegenerateGroups) {
  for (const auto& r : {std::vector<double>{1.5, 1.5, 1.5}, std::vector<double>{0.7}, std::vector<double>{}}) {
    const auto a = grpo_advantages(r);
    ASSERT_EQ(a.size(), r.size());
    for (double x : a) EXPECT_EQ(x, 0.0);
  }
  EXPECT_EQ(grpo_advantages(RolloutGroup{"p", {2.0, 2.0}}), (std::vector<double>{0.0, 0.0}));
}

TEST(Kl, ClosedForm) {
  const auto p = policy({0.5, 0.5}), q = policy({0.25, 0.75});
  EXPECT_NEAR(kl_divergence(p, q), 0.5 * std::log(2.0) + 0.5 * std::log(0.5 / 0.75), 1e-12);
  EXPECT_DOUBLE_EQ(kl_divergence(p, p), 0.0);
  EXPECT_NEAR(kl_divergence(policy({1.0, 0.0}), p), std::log(2.0), 1e-12);
}

TEST(Kl, SupportViolation) {
  try {
    kl_divergence(policy({0.5, 0.5}), policy({1.0, 0.0}));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("infinite KL"), std::string::npos);
  }
}

TEST(Kl, AlphabetMismatch) {
  ToyPolicy q{{"x", "y"}, {0.5, 0.5}};
  EXPECT_THROW(kl_divergence(policy({0.5, 0.5}), q), DataError);
}

TEST(Policy, Validation) {
  EXPECT_NO_THROW(policy({0.2, 0.8}).validate());
  EXPECT_THROW(policy({0.2, 0.7}).validate(), DataError);
  EXPECT_THROW(policy({-0.2, 1.2}).validate(), DataError);
  EXPECT_THROW((ToyPolicy{{"a"}, {0.5, 0.5}}).validate(), DataError);
  EXPECT_THROW((ToyPolicy{{}, {}}).validate(), DataError);
}

TEST(Objective, Enumeration) {
  const auto pi = policy({0.75, 0.25}), ref = policy({0.5, 0.5});
  const std::map<std::string, double> rewards{{"a", 1.0}, {"b", 0.0}};
  const double kl = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  EXPECT_NEAR(eval_rl_objective(pi, ref, rewards, 0.1), 0.75 - 0.1 * kl, 1e-12);
  EXPECT_NEAR(eval_rl_objective(pi, ref, rewards, 0.0), 0.75, 1e-12);
  EXPECT_NEAR(eval_rl_objective(ref, ref, rewards, 5.0), 0.5, 1e-12);
  EXPECT_THROW(eval_rl_objective(pi, ref, {{"a", 1.0}}, 0.1), DataError);
}

TEST(Objective, MovingTowardRewardHelpsWhenBetaSmall) {
  const auto ref = policy({0.5, 0.5});
  const std::map<std::string, double> rewards{{"a", 2.0}, {"b", 0.0}};
  EXPECT_GT(eval_rl_objective(policy({0.7, 0.3}), ref, rewards, 0.1), eval_rl_objective(ref, ref, rewards, 0.1));
  EXPECT_LT(eval_rl_objective(policy({0.99, 0.01}), ref, rewards, 50.0), eval_rl_objective(ref, ref, rewards, 50.0));
}

TEST(Simulate, MonotoneAcrossNoiseLevels) {
  OracleJudge judge;
  const auto docs = corpus(TaskKind::Table, 3);
  const auto lv = levels();
  SimOptions opt;
  opt.group_size = 4;
  const SimReport rep = simulate_policy_improvement(docs, lv, judge, 5, opt);
  ASSERT_EQ(rep.levels.size(), 3u);
  EXPECT_TRUE(rep.monotone);
  EXPECT_EQ(rep.levels[0].noise_id, "noisy");
  EXPECT_DOUBLE_EQ(rep.levels[2].mean_total, 2.0);
  EXPECT_DOUBLE_EQ(rep.levels[2].render_success_rate, 1.0);
  for (const auto& level : rep.levels) {
    ASSERT_EQ(level.groups.size(), 3u);
    for (const auto& g : level.groups) {
      ASSERT_EQ(g.rewards.size(), 4u);
      EXPECT_EQ(g.advantages, grpo_advantages(g.rewards));
      for (double r : g.rewards) {
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 2.0);
      }
    }
  }
}

TEST(Simulate, IndependentOfParallelism) {
  OracleJudge judge;
  const auto docs = corpus(TaskKind::Chart, 3);
  const auto lv = levels();
  SimOptions a, b;
  a.group_size = b.group_size = 3;
  b.max_parallel = 4;
  EXPECT_EQ(to_json(simulate_policy_improvement(docs, lv, judge, 9, a)),
            to_json(simulate_policy_improvement(docs, lv, judge, 9, b)));
}

TEST(Simulate, BatchScope) {
  OracleJudge judge;
  const auto docs = corpus(TaskKind::Svg, 2);
  const auto lv = levels();
  SimOptions opt;
  opt.group_size = 3;
  opt.scope = NormScope::Batch;
  const SimReport rep = simulate_policy_improvement(docs, lv, judge, 3, opt);
  EXPECT_EQ(to_json(rep)["levels"].size(), 3u);
  EXPECT_DOUBLE_EQ(rep.levels.back().mean_total, 2.0);
}

TEST(Simulate, AllRendersFail) {
  OracleJudge judge;
  const auto docs = corpus(TaskKind::Chart, 2);
  const auto lv = levels();
  SimOptions opt;
  opt.group_size = 3;
  opt.render_fail_rate = 1.0;
  const SimReport rep = simulate_policy_improvement(docs, lv, judge, 1, opt);
  for (const auto& level : rep.levels) {
    EXPECT_DOUBLE_EQ(level.render_success_rate, 0.0);
    EXPECT_DOUBLE_EQ(level.mean_total, 0.0);
  }
}

TEST(Simulate, BadOptions) {
  OracleJudge judge;
  const auto docs = corpus(TaskKind::Chart, 1);
  const auto lv = levels();
  SimOptions opt;
  opt.group_size = 0;
  EXPECT_THROW(simulate_policy_improvement(docs, lv, judge, 1, opt), ConfigError);
  opt.group_size = 2;
  opt.render_fail_rate = 1.5;
  EXPECT_THROW(simulate_policy_improvement(docs, lv, judge, 1, opt), ConfigError);
  EXPECT_TRUE(simulate_policy_improvement({}, lv, judge, 1).levels.empty());
}
