// Prints one [PASS]/[FAIL] line per acceptance criterion; exits non-zero
// if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "verm/app/config.hpp"
#include "verm/app/pipeline.hpp"
#include "verm/core/rng.hpp"
#include "verm/corrupt/sample.hpp"
#include "verm/judge/coarse.hpp"
#include "verm/judge/judge.hpp"
#include "verm/render/codec.hpp"
#include "verm/render/render.hpp"
#include "verm/reward/reward.hpp"
#include "verm/rlkit/rlkit.hpp"
#include "verm/score/bench.hpp"
#include "verm/score/match.hpp"
#include "verm/tts/tts.hpp"

using namespace verm;
namespace fs = std::filesystem;
namespace fx = verm::testing;

namespace {

constexpr TaskKind kTasks[] = {TaskKind::Chart, TaskKind::Table, TaskKind::Svg};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

DiscrepancyReport random_report(TaskKind task, Rng& rng) {
  const auto cats = taxonomy(task);
  const SeverityLevel levels[] = {SeverityLevel::Minor, SeverityLevel::Moderate, SeverityLevel::Critical};
  std::vector<ErrorItem> items;
  const int n = rng.range(0, 8);
  for (int i = 0; i < n; ++i)
    items.push_back({std::string(cats[rng.below(cats.size())]), levels[rng.below(3)], "loc" + std::to_string(i), ""});
  return DiscrepancyReport::from_errors(task, std::move(items));
}

/// Same task, counts and multiset of items; item order carries no meaning.
bool same_report(const DiscrepancyReport& a, const DiscrepancyReport& b) {
  auto key = [](const DiscrepancyReport& r) {
    std::vector<std::tuple<std::string, SeverityLevel, std::string, std::string>> k;
    for (const auto& e : r.errors) k.emplace_back(e.category, e.severity, e.location, e.description);
    std::sort(k.begin(), k.end());
    return k;
  };
  return a.task == b.task && a.counts == b.counts && key(a) == key(b);
}

ErrorItem random_item(TaskKind task, Rng& rng) {
  const auto cats = taxonomy(task);
  const SeverityLevel levels[] = {SeverityLevel::Minor, SeverityLevel::Moderate, SeverityLevel::Critical};
  return {std::string(cats[rng.below(cats.size())]), levels[rng.below(3)], "extra", ""};
}

void reward_bounds(Outcome& o) {
  const auto t0 = Clock::now();
  Rng rng(101);
  std::size_t cases = 0;
  for (TaskKind task : kTasks) {
    std::vector<DiscrepancyReport> reports;
    std::vector<double> sums;
    for (int i = 0; i < 1000; ++i) {
      reports.push_back(random_report(task, rng));
      sums.push_back(severity_sum(reports.back(), SeverityMap{}));
    }
    const Normalizer batch = fit_normalizer(sums);
    const Normalizer tight{"fixed", rng.uniform(0.0, 6.0), kDefaultEpsilon};
    for (const auto& rep : reports) {
      for (const Normalizer& n : {batch, tight}) {
        const RewardBreakdown b = combined_reward(true, JudgeVerdict{rep, std::nullopt}, n, SeverityMap{});
        o.check(b.r_verm >= 0.0 && b.r_verm <= 1.0, "r_verm out of [0,1]");
        o.check(b.total >= 0.0 && b.total <= 2.0, "total out of [0,2]");
        o.check(b.total == b.r_verm + b.r_rsr, "total != r_verm + r_rsr");
        if (rep.errors.empty()) o.check(b.r_verm == 1.0, "zero-error report did not give r_verm = 1");
        const RewardBreakdown failed = combined_reward(false, JudgeVerdict{rep, std::nullopt}, n, SeverityMap{});
        o.check(failed.total == 0.0, "render failure did not give total = 0");
        ++cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  o.check(secs < 5.0, "runtime above 5 s");
  o.detail << cases << " breakdowns over 3x1000 reports in " << secs << " s";
}

void monotonicity(Outcome& o) {
  Rng rng(202);
  std::size_t cases = 0, strict = 0;
  for (int i = 0; i < 3000; ++i) {
    const TaskKind task = kTasks[i % 3];
    const Normalizer n{"fixed", rng.uniform(0.5, 20.0), kDefaultEpsilon};
    DiscrepancyReport rep = random_report(task, rng);
    const double before_s = severity_sum(rep, SeverityMap{});
    const double before = verm_reward(before_s, n);
    std::vector<ErrorItem> items = rep.errors;
    items.push_back(random_item(task, rng));
    const DiscrepancyReport grown = DiscrepancyReport::from_errors(task, items);
    const double after = verm_reward(severity_sum(grown, SeverityMap{}), n);
    o.check(after <= before, "appending an error increased the reward");
    if (before_s < n.max_severity + n.epsilon) {
      o.check(after < before, "reward did not strictly decrease below the normalizer");
      ++strict;
    }
    ++cases;
  }
  o.detail << cases << " cases, " << strict << " in the strict region";
}

void oracle_round_trip(Outcome& o) {
  const auto t0 = Clock::now();
  const fs::path root = fx::scratch_dir("acceptance_oracle");
  HarnessConfig cfg;
  cfg.seed = 303;
  std::size_t recovered = 0, total = 0;
  for (TaskKind task : kTasks) {
    const fs::path dir = root / std::string(to_string(task));
    GenRequest req;
    req.task = task;
    req.n = 100;
    req.out_dir = dir;
    gen_corpus(cfg, req);
    const BenchManifest m = load_manifest(dir / "manifest.jsonl");
    o.check(m.entries.size() == 100, "corpus has fewer than 100 instances");
    for (const auto& e : m.entries) {
      const JudgeVerdict v = oracle_judge(load_judge_input(m, e));
      const bool same = same_report(v.report, e.gt_report);
      o.check(same, "oracle missed the annotation of " + e.id);
      recovered += same;
      ++total;
    }
    OracleJudge judge;
    ExactMatcher matcher;
    const BenchMetrics r = score_benchmark(m, judge, matcher, SeverityMap{});
    o.check(std::fabs(r.aggregate.hard.f1 - 1.0) <= 1e-9, "F1_h != 1");
    o.check(std::fabs(r.aggregate.soft.f1 - 1.0) <= 1e-9, "F1_s != 1");
    o.check(r.aggregate.s_c && std::fabs(*r.aggregate.s_c - 1.0) <= 1e-9, "S_c != 1");
  }
  fs::remove_all(root);
  const double secs = seconds_since(t0);
  o.check(secs < 60.0, "runtime above 60 s");
  o.detail << recovered << "/" << total << " reports recovered, F1_h = F1_s = S_c = 1 per task, " << secs << " s";
}

void scorer_arithmetic(Outcome& o) {
  const auto rep = [](std::vector<std::pair<std::string, std::string>> items) {
    std::vector<ErrorItem> v;
    for (auto& [cat, loc] : items) v.push_back({cat, SeverityLevel::Moderate, loc, ""});
    return DiscrepancyReport::from_errors(TaskKind::Chart, v);
  };
  ExactMatcher exact;
  const MatchResult r = match_errors(rep({{"text_error", "title"}, {"data_error", "s0"}, {"style_error", "s1"}}),
                                     rep({{"text_error", "title"}, {"data_error", "s0"}, {"data_error", "s2"},
                                          {"structure_error", "legend"}}),
                                     exact);
  const double f1 = prf1(r, Regime::Hard).f1;
  o.check(std::fabs(f1 - 4.0 / 7.0) <= 1e-12, "2TP/1FP/2FN F1 != 4/7");

  const MatchResult yp = complete_match({{0, 0, MatchLevel::Yes}, {1, 1, MatchLevel::Partial}}, 2, 2);
  o.check(prf1(yp, Regime::Hard).f1 == 0.5, "yes/partial F1_h != 0.5");
  o.check(prf1(yp, Regime::Soft).f1 == 1.0, "yes/partial F1_s != 1");

  Rng rng(404);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n_pred = rng.range(0, 8), n_gt = rng.range(0, 8);
    std::vector<std::size_t> gts(n_gt);
    std::iota(gts.begin(), gts.end(), 0);
    shuffle(gts, rng);
    std::vector<MatchDecision> d;
    for (std::size_t i = 0; i < std::min(n_pred, n_gt); ++i)
      if (rng.bernoulli(0.6)) d.push_back({i, gts[i], rng.bernoulli(0.5) ? MatchLevel::Yes : MatchLevel::Partial});
    const MatchResult m = complete_match(d, n_pred, n_gt);
    o.check(prf1(m, Regime::Soft).f1 >= prf1(m, Regime::Hard).f1, "F1_s < F1_h");
  }
  o.detail << "F1 = " << f1 << " (4/7), F1_h = 0.5, F1_s = 1, soft dominance over 1000 results";
}

void grpo_math(Outcome& o) {
  Rng rng(505);
  std::size_t normalized = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> r(static_cast<std::size_t>(rng.range(1, 16)));
    for (auto& x : r) x = rng.bernoulli(0.2) ? 1.0 : rng.uniform(0.0, 2.0);
    const auto a = grpo_advantages(r);
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
    double var = 0.0;
    for (double x : r) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / r.size());
    const double sum = std::accumulate(a.begin(), a.end(), 0.0);
    o.check(std::fabs(sum) < 1e-9, "advantages not zero-mean");
    if (sd >= kDegenerateStd) {
      double av = 0.0;
      for (double x : a) av += x * x;
      o.check(std::fabs(av / a.size() - 1.0) < 1e-9, "advantages not unit variance");
      ++normalized;
    } else {
      o.check(std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; }), "degenerate group not zero");
    }
  }

  auto simplex = [&](std::size_t n, double floor) {
    std::vector<double> p(n);
    for (auto& x : p) x = floor + rng.uniform();
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= s;
    p.back() = 1.0 - std::accumulate(p.begin(), p.end() - 1, 0.0);
    return p;
  };
  auto named = [](std::vector<double> p) {
    ToyPolicy t;
    for (std::size_t i = 0; i < p.size(); ++i) t.alphabet.push_back("y" + std::to_string(i));
    t.probs = std::move(p);
    return t;
  };
  double worst = 0.0, min_kl = 1.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.range(2, 6));
    const ToyPolicy pi = named(simplex(n, 0.0)), ref = named(simplex(n, 1e-3));
    std::map<std::string, double> rewards;
    double brute = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rng.uniform(0.0, 2.0);
      rewards[pi.alphabet[i]] = r;
      brute += pi.probs[i] * r;
    }
    worst = std::max(worst, std::fabs(eval_rl_objective(pi, ref, rewards, 0.0) - brute));
    const double kl = kl_divergence(pi, ref);
    min_kl = std::min(min_kl, kl);
    o.check(kl >= 0.0, "negative KL");
  }
  o.check(worst <= 1e-12, "beta = 0 objective differs from enumeration");
  const double pinned = eval_rl_objective(named({1.0, 0.0}), named({0.5, 0.5}), {{"y0", 1.0}, {"y1", 0.0}}, 1.0);
  o.check(std::fabs(pinned - (1.0 - std::log(2.0))) <= 1e-12, "pinned case != 1 - ln 2");
  o.detail << normalized << " normalized groups; max |objective - enumeration| = " << worst
           << "; pinned = " << pinned << "; min KL = " << min_kl;
}

void tts_repair(Outcome& o) {
  std::size_t runs = 0;
  for (TaskKind task : kTasks) {
    for (int k = 1; k <= 5; ++k) {
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Rng rng(seed * 1000 + k * 10 + static_cast<int>(task));
        const StructuredDoc gt = random_doc(task, rng);
        const PairInstance p = apply_edits(gt, plan_ops(gt, k, rng));
        const PairContext ctx{task, render(gt).image(), gt};
        OracleJudge judge;
        OracleRepairGenerator gen(gt, p.pred_doc);
        ReflectionOptions opt;
        opt.rounds = 5;
        const ReflectionTrace t = run_reflection(ctx, gen, judge, opt);
        const std::string tag = std::string(to_string(task)) + " k=" + std::to_string(k);
        o.check(t.steps.size() == static_cast<std::size_t>(k) + 1, tag + " did not converge in k rounds");
        o.check(t.steps.back().breakdown.s_verm == 0.0, tag + " final severity not 0");
        for (std::size_t i = 1; i < t.steps.size(); ++i) {
          o.check(t.steps[i].breakdown.s_verm < t.steps[i - 1].breakdown.s_verm, tag + " severity not decreasing");
          o.check(t.steps[i].breakdown.total >= t.steps[i - 1].breakdown.total, tag + " total decreased");
        }
        IdentityReviser ident(p.pred_doc);
        const ReflectionTrace it = run_reflection(ctx, ident, judge, opt);
        o.check(it.steps.size() == 1 && it.steps[0].stop_reason == StopReason::FixedPoint,
                tag + " identity did not stop at the first revision");
        ++runs;
      }
    }
  }
  o.detail << runs << " oracle-repair runs (k = 1..5, 3 tasks) converged in k rounds; identity stopped at fixed_point";
}

void reward_hacking(Outcome& o) {
  Rng rng(606);
  std::vector<double> sims, sums;
  const char* words[] = {"Revenue", "Output", "Growth", "Demand", "Volume"};
  while (sums.size() < 24) {
    const StructuredDoc gt = random_doc(TaskKind::Chart, rng);
    StructuredDoc pred = gt;
    std::vector<ErrorItem> items;
    std::string title;
    do {
      title = std::string(words[rng.below(5)]) + " " + std::to_string(2000 + rng.range(0, 30));
    } while (title == gt.chart().title);
    items.push_back(apply_op(pred, catalog_op(pred, OpKind::Retitle, {}, OpParams{.text = title})));
    std::vector<int> ticks(gt.chart().tick_labels.size());
    std::iota(ticks.begin(), ticks.end(), 0);
    shuffle(ticks, rng);
    const int relabels = std::min<int>(rng.range(1, 3), static_cast<int>(ticks.size()));
    for (int i = 0; i < relabels; ++i) {
      OpTarget t;
      t.index = ticks[i];
      std::string label;
      do {
        label = "T" + std::to_string(rng.range(0, 99));
      } while (label == pred.chart().tick_labels[ticks[i]]);
      items.push_back(apply_op(pred, catalog_op(pred, OpKind::RelabelTick, t, OpParams{.text = label})));
    }
    const RasterImage gi = render(gt).image(), pi = render(pred).image();
    sims.push_back(coarse_similarity(gi, pi));
    const JudgeVerdict v = oracle_judge(JudgeInput{TaskKind::Chart, gi, pi, gt, pred});
    o.check(v.report.errors.size() == items.size(), "oracle report size differs from injected edits");
    sums.push_back(severity_sum(v.report, SeverityMap{}));
  }
  const Normalizer batch = fit_normalizer(sums);
  double min_sim = 1.0, max_r = 0.0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const double r = verm_reward(sums[i], batch);
    min_sim = std::min(min_sim, sims[i]);
    max_r = std::max(max_r, r);
    o.check(sims[i] >= 0.9, "coarse similarity below 0.9");
    o.check(r <= 0.8, "r_verm above 0.8");
  }
  o.detail << sums.size() << " text-only chart edits: min coarse similarity " << min_sim << ", max r_verm " << max_r
           << " (batch max " << batch.max_severity << ")";
}

bool manifest_file_valid(const fs::path& dir, const std::string& header) {
  const fs::path p = dir / "m.jsonl";
  write_text_file(p, header + "\n");
  return validate_path(p).ok();
}

void manifest_stats(Outcome& o) {
  const fs::path dir = fx::scratch_dir("acceptance_manifest");
  const std::string good =
      R"({"manifest":{"stats":{"chart":595,"svg":442,"table":298},"total":1335,"profile":"vc-rewardbench"}})";
  o.check(manifest_file_valid(dir, good), "declared benchmark split rejected");
  const char* others[] = {
      R"({"manifest":{"stats":{"chart":595,"svg":298,"table":442},"total":1335,"profile":"vc-rewardbench"}})",
      R"({"manifest":{"stats":{"chart":596,"svg":441,"table":298},"total":1335,"profile":"vc-rewardbench"}})",
      R"({"manifest":{"stats":{"chart":442,"svg":595,"table":298},"total":1335,"profile":"vc-rewardbench"}})",
      R"({"manifest":{"stats":{"chart":595,"svg":442,"table":297},"total":1335,"profile":"vc-rewardbench"}})",
      R"({"manifest":{"stats":{"chart":595,"svg":442,"table":298},"total":1336,"profile":"vc-rewardbench"}})",
      R"({"manifest":{"stats":{"chart":595,"svg":442},"total":1335,"profile":"vc-rewardbench"}})",
      R"({"manifest":{"stats":{"chart":595,"svg":442,"table":299},"total":1335}})",
  };
  int rejected = 0;
  for (const char* h : others) {
    const bool ok = manifest_file_valid(dir, h);
    o.check(!ok, std::string("accepted ") + h);
    rejected += !ok;
  }
  fs::remove_all(dir);
  o.detail << "595/442/298 of 1335 accepted; " << rejected << "/" << std::size(others) << " other splits rejected";
}

void determinism(Outcome& o) {
  const fs::path root = fx::scratch_dir("acceptance_gen");
  HarnessConfig cfg;
  cfg.seed = 7;
  GenRequest req;
  req.task = TaskKind::Chart;
  req.n = 20;
  req.out_dir = root / "a";
  const Json a = gen_corpus(cfg, req);
  req.out_dir = root / "b";
  cfg.max_parallel = 1;
  const Json b = gen_corpus(cfg, req);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path other = root / "b" / fs::relative(e.path(), root / "a");
    o.check(fs::exists(other) && read_text_file(e.path()) == read_text_file(other),
            "file differs: " + fs::relative(e.path(), root / "a").string());
    ++files;
  }
  o.check(a == b, "summaries differ");
  o.check(a["digest"] == "ed3f6f26dd81b88d", "corpus digest differs from the frozen value");
  const std::uint64_t golden = render(fx::two_bar_chart()).image().content_hash();
  o.check(golden == 0x1c9db0e969ea4565ULL, "two-bar render hash differs from the frozen value");
  fs::remove_all(root);
  o.detail << files << " files byte-identical across runs; digest " << a["digest"].get<std::string>()
           << "; two-bar hash " << hash_hex(golden);
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"reward bounds and identities", reward_bounds},
      {"reward monotonicity", monotonicity},
      {"oracle round-trip", oracle_round_trip},
      {"scorer arithmetic", scorer_arithmetic},
      {"GRPO and objective math", grpo_math},
      {"TTS monotone repair", tts_repair},
      {"reward-hacking demonstration", reward_hacking},
      {"manifest stats fixture", manifest_stats},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "threw: " << e.what();
    }
    failures += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
