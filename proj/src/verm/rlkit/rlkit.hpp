#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "verm/core/doc.hpp"
#include "verm/core/report.hpp"
#include "verm/corrupt/sample.hpp"
#include "verm/judge/judge.hpp"
#include "verm/reward/reward.hpp"

namespace verm {

inline constexpr int kDefaultGroupSize = 8;
inline constexpr double kDegenerateStd = 1e-12;

struct RolloutGroup {
  std::string prompt_id;
  std::vector<double> rewards;
};

/// (r - mean) / population std; all zeros when std < 1e-12.
std::vector<double> grpo_advantages(std::span<const double> rewards);
inline std::vector<double> grpo_advantages(const RolloutGroup& group) { return grpo_advantages(group.rewards); }

/// A distribution over a finite, named alphabet.
struct ToyPolicy {
  std::vector<std::string> alphabet;
  std::vector<double> probs;

  /// Throws DataError unless probs are non-negative, one per symbol and
  /// sum to 1 within 1e-12.
  void validate() const;
};

/// Σ π ln(π / ref) with 0 ln 0 = 0. Throws DataError("infinite KL") when π
/// puts mass where ref has none.
double kl_divergence(const ToyPolicy& policy, const ToyPolicy& ref);

/// Expected reward minus beta times the KL to ref, by exact enumeration.
double eval_rl_objective(const ToyPolicy& policy, const ToyPolicy& ref,
                         const std::map<std::string, double>& rewards, double beta);

struct SimOptions {
  int group_size = kDefaultGroupSize;
  NormScope scope = NormScope::Group;
  double epsilon = kDefaultEpsilon;
  SeverityMap severity;
  double render_fail_rate = 0.0;  // share of rollouts replaced by unrenderable docs
  std::size_t max_parallel = 1;
};

struct SimGroup {
  std::string prompt_id;
  std::vector<double> rewards;
  std::vector<double> advantages;
};

struct SimLevel {
  std::string noise_id;
  double mean_total = 0.0;
  double mean_r_verm = 0.0;
  double render_success_rate = 0.0;
  bool monotone = true;  // mean_total did not drop against the previous level
  std::vector<SimGroup> groups;
};

struct SimReport {
  std::vector<SimLevel> levels;
  bool monotone = true;
};

Json to_json(const SimReport& report);

/// Rolls out group_size noisy predictions per corpus doc at each noise
/// level (noisiest first), renders, judges and rewards them. Each prompt
/// draws from its own seed stream, so results do not depend on
/// max_parallel.
SimReport simulate_policy_improvement(std::span<const StructuredDoc> corpus, std::span<const NoiseConfig> levels,
                                      Judge& judge, std::uint64_t seed, const SimOptions& options = {});

}  // namespace verm
