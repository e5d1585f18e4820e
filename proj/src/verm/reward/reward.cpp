#include "verm/reward/reward.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "verm/core/errors.hpp"

namespace verm {

std::string_view to_string(NormScope scope) {
  return scope == NormScope::Group ? "group" : "batch";
}

NormScope norm_scope_from_string(std::string_view text) {
  if (text == "group") return NormScope::Group;
  if (text == "batch") return NormScope::Batch;
  throw ConfigError("unknown normalizer scope '" + std::string(text) + "'");
}

Json to_json(const RewardBreakdown& b) {
  return Json{{"s_verm", b.s_verm}, {"s_norm", b.s_norm}, {"r_verm", b.r_verm}, {"r_rsr", b.r_rsr}, {"total", b.total}};
}

RewardBreakdown breakdown_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("reward breakdown must be an object");
  RewardBreakdown b;
  auto field = [&](const char* name, double& out) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_number()) throw DataError(std::string("reward breakdown: missing number '") + name + "'");
    out = it->get<double>();
  };
  field("s_verm", b.s_verm);
  field("s_norm", b.s_norm);
  field("r_verm", b.r_verm);
  field("r_rsr", b.r_rsr);
  field("total", b.total);
  return b;
}

Json to_json(const Normalizer& n) {
  return Json{{"scope", n.scope}, {"max_severity", n.max_severity}, {"epsilon", n.epsilon}};
}

double severity_sum(const DiscrepancyReport& report, const SeverityMap& map) {
  double s = 0.0;
  for (const auto& e : report.errors) s += severity_value(e.severity, map);
  return s;
}

Normalizer fit_normalizer(std::span<const double> sums, double epsilon, std::string scope) {
  if (sums.empty()) throw DataError("cannot fit a normalizer on no severity sums");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DataError("epsilon must be positive");
  for (double s : sums)
    if (!(s >= 0.0) || !std::isfinite(s)) throw DataError("severity sums must be finite and non-negative");
  return Normalizer{std::move(scope), *std::max_element(sums.begin(), sums.end()), epsilon};
}

double verm_reward(double s, const Normalizer& norm) {
  return std::clamp(1.0 - s / (norm.max_severity + norm.epsilon), 0.0, 1.0);
}

RewardBreakdown combined_reward(bool render_ok, const std::optional<JudgeVerdict>& verdict,
                                const Normalizer& norm, const SeverityMap& map) {
  RewardBreakdown b;
  if (!render_ok) return b;
  if (!verdict) throw DataError("rendered prediction has no verdict");
  b.r_rsr = 1.0;
  b.s_verm = severity_sum(verdict->report, map);
  b.s_norm = b.s_verm / (norm.max_severity + norm.epsilon);
  b.r_verm = verm_reward(b.s_verm, norm);
  b.total = b.r_rsr + b.r_verm;
  return b;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double text_baseline_reward(const StructuredDoc& pred, const StructuredDoc& gt) {
  if (pred.task != gt.task) throw DataError("text baseline needs docs of the same task");
  const std::string p = canonical_serialize(pred);
  const std::string g = canonical_serialize(gt);
  const std::size_t longest = std::max(p.size(), g.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(p, g)) / static_cast<double>(longest);
}

}  // namespace verm
