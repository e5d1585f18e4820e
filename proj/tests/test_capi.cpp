#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "verm/verm.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kChart =
    R"({"task":"chart","body":{"width":640,"height":480,"title":"Two bars","legend":true,"tick_labels":["a","b"],)"
    R"("series":[{"kind":"bar","label":"values","color":"#1f77b4","points":[[0,3],[1,5]]}]}})";

const char* kPlan = R"([{"kind":"retitle","severity":"moderate","params":{"text":"Two bards"}}])";

struct Text {
  verm_text* t = nullptr;
  ~Text() { verm_text_free(t); }
  std::string str() const { return {verm_text_data(t), verm_text_size(t)}; }
  json parsed() const { return json::parse(str()); }
};

struct Harness {
  verm_harness* h = nullptr;
  ~Harness() { verm_harness_destroy(h); }
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("verm_capi_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(CApi, VersionAndNames) {
  EXPECT_STREQ(verm_version(), "0.1.0");
  EXPECT_STREQ(verm_status_name(VERM_OK), "ok");
  EXPECT_STRNE(verm_status_name(VERM_ERR_CONFIG), verm_status_name(VERM_ERR_DATA));
}

TEST(CApi, HarnessLifecycle) {
  Harness h;
  ASSERT_EQ(verm_harness_create(nullptr, &h.h), VERM_OK);
  Text cfg;
  ASSERT_EQ(verm_harness_config(h.h, &cfg.t), VERM_OK);
  EXPECT_EQ(cfg.parsed()["rounds"], 3);
  EXPECT_EQ(verm_harness_update(h.h, R"({"rounds": 5})"), VERM_OK);
  EXPECT_EQ(verm_harness_update(h.h, R"({"rounds": 0})"), VERM_ERR_CONFIG);
  EXPECT_NE(std::string(verm_last_error()).find("round"), std::string::npos);
  Text after;
  ASSERT_EQ(verm_harness_config(h.h, &after.t), VERM_OK);
  EXPECT_EQ(after.parsed()["rounds"], 5);
  verm_harness* bad = nullptr;
  EXPECT_EQ(verm_harness_create(R"({"bogus": 1})", &bad), VERM_ERR_CONFIG);
  EXPECT_EQ(bad, nullptr);
  EXPECT_EQ(verm_harness_load("/nonexistent/config.json", &bad), VERM_ERR_CONFIG);
  EXPECT_EQ(verm_harness_create(nullptr, nullptr), VERM_ERR_ARGUMENT);
  verm_harness_destroy(nullptr);
  verm_text_free(nullptr);
}

TEST(CApi, RenderAndJudge) {
  int rendered = 0;
  uint64_t hash = 0;
  Text diag;
  ASSERT_EQ(verm_render(kChart, nullptr, &rendered, &hash, &diag.t), VERM_OK);
  EXPECT_EQ(rendered, 1);
  EXPECT_EQ(hash, 0x1c9db0e969ea4565ULL);

  std::string broken = kChart;
  broken.replace(broken.find("\"width\":640"), 11, "\"width\":0");
  Text why;
  ASSERT_EQ(verm_render(broken.c_str(), nullptr, &rendered, &hash, &why.t), VERM_OK);
  EXPECT_EQ(rendered, 0);
  EXPECT_FALSE(why.str().empty());
  EXPECT_EQ(verm_render("{", nullptr, &rendered, &hash, nullptr), VERM_ERR_DATA);

  Text pair;
  ASSERT_EQ(verm_apply_plan(kChart, kPlan, &pair.t), VERM_OK);
  const json p = pair.parsed();
  ASSERT_EQ(p["gt_report"]["errors"].size(), 1u);
  Text report;
  ASSERT_EQ(verm_oracle_judge(kChart, p["pred_doc"].dump().c_str(), &report.t), VERM_OK);
  EXPECT_EQ(report.parsed()["errors"], p["gt_report"]["errors"]);

  double s = 0.0;
  ASSERT_EQ(verm_severity_sum(report.str().c_str(), nullptr, &s), VERM_OK);
  EXPECT_DOUBLE_EQ(s, 2.0);
  const double map[3] = {1, 4, 9};
  ASSERT_EQ(verm_severity_sum(report.str().c_str(), map, &s), VERM_OK);
  EXPECT_DOUBLE_EQ(s, 4.0);
}

TEST(CApi, CoarseSimilarity) {
  const fs::path dir = scratch("coarse");
  int rendered = 0;
  uint64_t hash = 0;
  const std::string png = (dir / "a.png").string();
  ASSERT_EQ(verm_render(kChart, png.c_str(), &rendered, &hash, nullptr), VERM_OK);
  double sim = 0.0;
  ASSERT_EQ(verm_coarse_similarity(png.c_str(), png.c_str(), &sim), VERM_OK);
  EXPECT_DOUBLE_EQ(sim, 1.0);
  EXPECT_EQ(verm_coarse_similarity(png.c_str(), "/nonexistent.png", &sim), VERM_ERR_DATA);
  fs::remove_all(dir);
}

TEST(CApi, RewardMath) {
  double r = 0.0;
  ASSERT_EQ(verm_verm_reward(3.0, 6.0, 1e-9, &r), VERM_OK);
  EXPECT_NEAR(r, 0.5, 1e-9);
  EXPECT_EQ(verm_verm_reward(-1.0, 6.0, 1e-9, &r), VERM_ERR_ARGUMENT);
  Text b;
  ASSERT_EQ(verm_combined_reward(0, nullptr, 6.0, 1e-9, nullptr, &b.t), VERM_OK);
  EXPECT_EQ(b.parsed()["total"], 0.0);
  Text missing;
  EXPECT_EQ(verm_combined_reward(1, nullptr, 6.0, 1e-9, nullptr, &missing.t), VERM_ERR_DATA);
  size_t d = 0;
  ASSERT_EQ(verm_levenshtein("kitten", "sitting", &d), VERM_OK);
  EXPECT_EQ(d, 3u);
}

TEST(CApi, RlMath) {
  const double rewards[] = {1, 2, 3, 4};
  double adv[4];
  ASSERT_EQ(verm_grpo_advantages(rewards, 4, adv), VERM_OK);
  EXPECT_NEAR(adv[3], 1.5 / std::sqrt(1.25), 1e-12);
  const double pi[] = {0.75, 0.25}, ref[] = {0.5, 0.5}, rw[] = {1.0, 0.0};
  double obj = 0.0;
  ASSERT_EQ(verm_rl_objective(pi, ref, rw, 2, 0.1, &obj), VERM_OK);
  EXPECT_NEAR(obj, 0.75 - 0.1 * (0.75 * std::log(1.5) + 0.25 * std::log(0.5)), 1e-12);
  const double zero_ref[] = {1.0, 0.0};
  EXPECT_EQ(verm_rl_objective(pi, zero_ref, rw, 2, 0.1, &obj), VERM_ERR_DATA);
  EXPECT_NE(std::string(verm_last_error()).find("infinite KL"), std::string::npos);
}

TEST(CApi, ScoringMath) {
  double prf[3];
  ASSERT_EQ(verm_prf1(2, 3, 4, prf), VERM_OK);
  EXPECT_NEAR(prf[2], 4.0 / 7.0, 1e-12);
  ASSERT_EQ(verm_prf1(0, 0, 0, prf), VERM_OK);
  EXPECT_EQ(prf[2], 1.0);
  EXPECT_EQ(verm_prf1(5, 3, 4, prf), VERM_ERR_ARGUMENT);
  const double xs[] = {1, 2, 3}, ys[] = {1, 3, 2}, cs[] = {4, 4, 4};
  double r = 0.0;
  int defined = 0;
  ASSERT_EQ(verm_pearson(xs, ys, 3, &r, &defined), VERM_OK);
  EXPECT_EQ(defined, 1);
  EXPECT_NEAR(r, 0.5, 1e-12);
  ASSERT_EQ(verm_pearson(xs, cs, 3, &r, &defined), VERM_OK);
  EXPECT_EQ(defined, 0);
}

TEST(CApi, PipelineRoundTrip) {
  const fs::path dir = scratch("pipeline");
  Harness h;
  ASSERT_EQ(verm_harness_create(R"({"seed": 5, "max_parallel": 2})", &h.h), VERM_OK);
  Text summary;
  ASSERT_EQ(verm_gen(h.h, "svg", 4, dir.string().c_str(), nullptr, nullptr, &summary.t), VERM_OK);
  EXPECT_EQ(summary.parsed()["written"], 4);
  int valid = 0;
  Text v;
  ASSERT_EQ(verm_validate(dir.string().c_str(), &valid, &v.t), VERM_OK);
  EXPECT_EQ(valid, 1) << v.str();
  const std::string manifest = (dir / "manifest.jsonl").string();
  Text score;
  ASSERT_EQ(verm_score_manifest(h.h, manifest.c_str(), "oracle", "exact", &score.t), VERM_OK);
  EXPECT_EQ(score.parsed()["aggregate"]["f1_h"], 1.0);
  Text sim;
  ASSERT_EQ(verm_rl_sim(h.h, nullptr, "chart", 2, "oracle", &sim.t), VERM_OK);
  EXPECT_EQ(sim.parsed()["levels"].size(), 3u);
  Text bad;
  EXPECT_EQ(verm_score_manifest(h.h, manifest.c_str(), "coarse", "exact", &bad.t), VERM_ERR_CONFIG);
  EXPECT_EQ(verm_gen(h.h, "video", 1, dir.string().c_str(), nullptr, nullptr, &bad.t), VERM_ERR_DATA);
  fs::remove_all(dir);
}

TEST(CApi, CancelAbortsRemoteWork) {
  setenv("VERM_CAPI_TEST_KEY", "k", 1);
  Harness h;
  ASSERT_EQ(verm_harness_create(R"({"judge_endpoint": {"url": "http://127.0.0.1:1/v1/chat/completions",)"
                                R"( "model": "m", "api_key_env": "VERM_CAPI_TEST_KEY"}})",
                                &h.h),
            VERM_OK);
  const fs::path dir = scratch("cancel");
  Text summary;
  ASSERT_EQ(verm_gen(h.h, "table", 2, dir.string().c_str(), nullptr, nullptr, &summary.t), VERM_OK);
  verm_harness_cancel(h.h);
  Text out;
  EXPECT_EQ(verm_score_manifest(h.h, (dir / "manifest.jsonl").string().c_str(), "remote", "exact", &out.t),
            VERM_ERR_ABORTED);
  fs::remove_all(dir);
}
