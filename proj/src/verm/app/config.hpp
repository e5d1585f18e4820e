#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "verm/core/report.hpp"
#include "verm/corrupt/sample.hpp"
#include "verm/judge/remote.hpp"
#include "verm/render/plugin.hpp"
#include "verm/reward/reward.hpp"

namespace verm {

enum class GenRoute { Edit, Infer };

struct GenSettings {
  int min_ops = 1;
  int max_ops = 4;
  GenRoute route = GenRoute::Edit;
  NoiseConfig noise{"gen", 0.3, {}, NoisePolicy::Independent, 2};
  bool operator==(const GenSettings&) const = default;
};

/// Noisiest first: all rates 0.6, 0.3, then 0.
std::vector<NoiseConfig> default_noise_levels();

/// Everything a run needs besides its inputs. Loaded from one JSON
/// document; command-line flags override individual fields afterwards.
struct HarnessConfig {
  SeverityMap severity;
  double epsilon = kDefaultEpsilon;
  std::optional<NormScope> norm_scope;  // unset: group for rl-sim, batch elsewhere
  int rounds = 3;
  double stop_threshold = 2.0;
  std::uint64_t seed = 0;
  std::size_t max_parallel = 4;
  int group_size = 8;
  double render_fail_rate = 0.0;
  std::vector<NoiseConfig> noise_levels = default_noise_levels();
  GenSettings gen;
  std::optional<RemoteEndpointConfig> judge_endpoint;
  std::optional<RemoteEndpointConfig> matcher_endpoint;
  std::optional<RemoteEndpointConfig> generator_endpoint;
  std::optional<SidecarConfig> sidecar;
  std::optional<std::string> prompt_dir;
};

Json to_json(const HarnessConfig& cfg);
/// Rejects unknown keys and out-of-range values with ConfigError.
HarnessConfig config_from_json(const Json& j);
HarnessConfig load_config(const std::string& path);
/// Throws ConfigError on out-of-range fields.
void validate_config(const HarnessConfig& cfg);

}  // namespace verm
