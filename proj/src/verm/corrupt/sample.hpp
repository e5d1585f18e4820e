#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "verm/core/rng.hpp"
#include "verm/corrupt/ops.hpp"

namespace verm {

enum class NoisePolicy {
  Independent,  // max_per_category Bernoulli trials per category
  AtMostOne,    // a single trial per category
};

/// Per-category corruption rates for the Infer route. A category without
/// its own rate falls back to `all`, then to 0.
struct NoiseConfig {
  std::string id;
  std::optional<double> all;
  std::map<std::string, double> rates;
  NoisePolicy policy = NoisePolicy::Independent;
  int max_per_category = 2;

  double rate_for(std::string_view category) const;
  /// Throws ConfigError on rates outside [0, 1] or a non-positive trial count.
  void validate() const;
  bool operator==(const NoiseConfig&) const = default;
};

Json to_json(const NoiseConfig& noise);
NoiseConfig noise_from_json(const Json& j);

/// Stochastic degradation: draws ops from the noise rates with a generator
/// seeded by `seed`, then delegates to apply_edits. Ops never touch an
/// element an earlier op in the same draw already changed.
PairInstance sample_infer(const StructuredDoc& doc, const NoiseConfig& noise, std::uint64_t seed);

/// Exactly k non-overlapping ops over random categories for an Edit-route
/// instance. Throws DataError when the doc cannot host k of them.
std::vector<CorruptionOp> plan_ops(const StructuredDoc& doc, int k, Rng& rng);

/// A random valid document of the given task, sized so every catalog
/// operator has an eligible target.
StructuredDoc random_doc(TaskKind task, Rng& rng);

}  // namespace verm
