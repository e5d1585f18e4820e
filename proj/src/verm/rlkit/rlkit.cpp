#include "verm/rlkit/rlkit.hpp"

#include <cmath>
#include <optional>

#include "verm/core/errors.hpp"
#include "verm/core/parallel.hpp"
#include "verm/core/rng.hpp"
#include "verm/render/render.hpp"

namespace verm {

std::vector<double> grpo_advantages(std::span<const double> rewards) {
  std::vector<double> out(rewards.size(), 0.0);
  if (rewards.empty()) return out;
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / n);
  if (sd < kDegenerateStd) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / sd;
  return out;
}

void ToyPolicy::validate() const {
  if (alphabet.size() != probs.size()) throw DataError("policy: one probability per symbol required");
  if (alphabet.empty()) throw DataError("policy: empty alphabet");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DataError("policy: probabilities must be non-negative");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw DataError("policy: probabilities must sum to 1");
}

namespace {

void check_pair(const ToyPolicy& policy, const ToyPolicy& ref) {
  policy.validate();
  ref.validate();
  if (policy.alphabet != ref.alphabet) throw DataError("policy and reference use different alphabets");
}

}  // namespace

double kl_divergence(const ToyPolicy& policy, const ToyPolicy& ref) {
  check_pair(policy, ref);
  double kl = 0.0;
  for (std::size_t i = 0; i < policy.probs.size(); ++i) {
    const double p = policy.probs[i];
    if (p == 0.0) continue;
    if (ref.probs[i] == 0.0) throw DataError("infinite KL");
    kl += p * std::log(p / ref.probs[i]);
  }
  return kl;
}

double eval_rl_objective(const ToyPolicy& policy, const ToyPolicy& ref,
                         const std::map<std::string, double>& rewards, double beta) {
  const double kl = kl_divergence(policy, ref);
  double expected = 0.0;
  for (std::size_t i = 0; i < policy.probs.size(); ++i) {
    auto it = rewards.find(policy.alphabet[i]);
    if (it == rewards.end()) throw DataError("no reward for output '" + policy.alphabet[i] + "'");
    expected += policy.probs[i] * it->second;
  }
  return expected - beta * kl;
}

Json to_json(const SimReport& report) {
  Json levels = Json::array();
  for (const auto& l : report.levels) {
    Json groups = Json::array();
    for (const auto& g : l.groups)
      groups.push_back({{"prompt_id", g.prompt_id}, {"rewards", g.rewards}, {"advantages", g.advantages}});
    levels.push_back({{"noise_id", l.noise_id},
                      {"mean_total", l.mean_total},
                      {"mean_r_verm", l.mean_r_verm},
                      {"render_success_rate", l.render_success_rate},
                      {"monotone", l.monotone},
                      {"groups", std::move(groups)}});
  }
  return Json{{"levels", std::move(levels)}, {"monotone", report.monotone}};
}

namespace {

void make_unrenderable(StructuredDoc& doc) {
  switch (doc.task) {
    case TaskKind::Chart: doc.chart().width = 0; break;
    case TaskKind::Table: doc.table().rows = 0; break;
    case TaskKind::Svg: doc.svg().width = 0; break;
  }
}

struct Rollout {
  bool render_ok = false;
  std::optional<JudgeVerdict> verdict;
  double s = 0.0;
};

}  // namespace

SimReport simulate_policy_improvement(std::span<const StructuredDoc> corpus, std::span<const NoiseConfig> levels,
                                      Judge& judge, std::uint64_t seed, const SimOptions& options) {
  SimReport report;
  if (corpus.empty()) return report;
  if (options.group_size < 1) throw ConfigError("group size must be at least 1");
  if (!(options.render_fail_rate >= 0.0 && options.render_fail_rate <= 1.0))
    throw ConfigError("render fail rate must lie in [0, 1]");
  for (const auto& noise : levels) noise.validate();

  std::vector<RasterImage> gt_images(corpus.size());
  parallel_for(corpus.size(), options.max_parallel, [&](std::size_t i) {
    RenderResult r = render(corpus[i]);
    if (!r.success()) throw DataError("corpus doc " + std::to_string(i) + " does not render: " + r.diagnostic());
    gt_images[i] = r.image();
  });

  const std::size_t g = static_cast<std::size_t>(options.group_size);
  for (std::size_t level = 0; level < levels.size(); ++level) {
    const NoiseConfig& noise = levels[level];
    std::vector<std::vector<Rollout>> rollouts(corpus.size(), std::vector<Rollout>(g));
    parallel_for(corpus.size(), options.max_parallel, [&](std::size_t p) {
      Rng stream(splitmix64(seed ^ splitmix64(level * 0x100000001ULL + p)));
      for (std::size_t k = 0; k < g; ++k) {
        PairInstance inst = sample_infer(corpus[p], noise, stream.next());
        if (stream.uniform() < options.render_fail_rate) make_unrenderable(inst.pred_doc);
        RenderResult r = render(inst.pred_doc);
        Rollout& out = rollouts[p][k];
        out.render_ok = r.success();
        if (!out.render_ok) continue;
        JudgeInput in{corpus[p].task, gt_images[p], r.image(), corpus[p], inst.pred_doc};
        out.verdict = judge.judge(in);
        out.s = severity_sum(out.verdict->report, options.severity);
      }
    });

    auto sums_of = [&](std::size_t p) {
      std::vector<double> s;
      for (const auto& r : rollouts[p])
        if (r.render_ok) s.push_back(r.s);
      return s;
    };
    std::optional<Normalizer> batch_norm;
    if (options.scope == NormScope::Batch) {
      std::vector<double> all;
      for (std::size_t p = 0; p < corpus.size(); ++p) {
        auto s = sums_of(p);
        all.insert(all.end(), s.begin(), s.end());
      }
      if (!all.empty()) batch_norm = fit_normalizer(all, options.epsilon, "batch:" + noise.id);
    }

    SimLevel out;
    out.noise_id = noise.id;
    double total = 0.0, r_verm = 0.0, ok = 0.0;
    for (std::size_t p = 0; p < corpus.size(); ++p) {
      std::optional<Normalizer> norm = batch_norm;
      if (options.scope == NormScope::Group) {
        auto s = sums_of(p);
        if (!s.empty()) norm = fit_normalizer(s, options.epsilon, "group:" + std::to_string(p));
      }
      SimGroup group;
      group.prompt_id = std::to_string(p);
      for (const auto& r : rollouts[p]) {
        const RewardBreakdown b =
            combined_reward(r.render_ok, r.verdict, norm.value_or(Normalizer{}), options.severity);
        group.rewards.push_back(b.total);
        total += b.total;
        r_verm += b.r_verm;
        ok += b.r_rsr;
      }
      group.advantages = grpo_advantages(group.rewards);
      out.groups.push_back(std::move(group));
    }
    const double n = static_cast<double>(corpus.size() * g);
    out.mean_total = total / n;
    out.mean_r_verm = r_verm / n;
    out.render_success_rate = ok / n;
    if (!report.levels.empty()) out.monotone = out.mean_total >= report.levels.back().mean_total;
    report.monotone = report.monotone && out.monotone;
    report.levels.push_back(std::move(out));
  }
  return report;
}

}  // namespace verm
