#include "verm/score/match.hpp"

#include <algorithm>
#include <cmath>

#include "verm/core/errors.hpp"

namespace verm {

std::string_view to_string(MatchLevel level) { return level == MatchLevel::Yes ? "yes" : "partial"; }

Json to_json(const MatchResult& r) {
  Json d = Json::array();
  for (const auto& m : r.decisions) d.push_back({{"pred", m.pred}, {"gt", m.gt}, {"level", to_string(m.level)}});
  return Json{{"decisions", d}, {"unmatched_pred", r.unmatched_pred}, {"unmatched_gt", r.unmatched_gt}};
}

std::vector<std::string> match_violations(const MatchResult& r, const DiscrepancyReport& pred,
                                          const DiscrepancyReport& gt) {
  std::vector<std::string> out;
  std::vector<int> seen_pred(pred.errors.size(), 0), seen_gt(gt.errors.size(), 0);
  auto mark = [&](std::vector<int>& seen, std::size_t i, const char* side) {
    if (i >= seen.size()) {
      out.push_back(std::string(side) + " index " + std::to_string(i) + " out of range");
      return false;
    }
    ++seen[i];
    return true;
  };
  for (const auto& m : r.decisions) {
    const bool a = mark(seen_pred, m.pred, "pred");
    const bool b = mark(seen_gt, m.gt, "gt");
    if (a && b && pred.errors[m.pred].category != gt.errors[m.gt].category)
      out.push_back("pred " + std::to_string(m.pred) + " and gt " + std::to_string(m.gt) + " differ in category");
  }
  for (std::size_t i : r.unmatched_pred) mark(seen_pred, i, "pred");
  for (std::size_t i : r.unmatched_gt) mark(seen_gt, i, "gt");
  for (std::size_t i = 0; i < seen_pred.size(); ++i)
    if (seen_pred[i] != 1) out.push_back("pred " + std::to_string(i) + " appears " + std::to_string(seen_pred[i]) + " times");
  for (std::size_t i = 0; i < seen_gt.size(); ++i)
    if (seen_gt[i] != 1) out.push_back("gt " + std::to_string(i) + " appears " + std::to_string(seen_gt[i]) + " times");
  return out;
}

MatchResult complete_match(std::vector<MatchDecision> decisions, std::size_t n_pred, std::size_t n_gt) {
  MatchResult r;
  std::vector<bool> used_pred(n_pred), used_gt(n_gt);
  for (const auto& d : decisions) {
    if (d.pred < n_pred) used_pred[d.pred] = true;
    if (d.gt < n_gt) used_gt[d.gt] = true;
  }
  for (std::size_t i = 0; i < n_pred; ++i)
    if (!used_pred[i]) r.unmatched_pred.push_back(i);
  for (std::size_t i = 0; i < n_gt; ++i)
    if (!used_gt[i]) r.unmatched_gt.push_back(i);
  r.decisions = std::move(decisions);
  return r;
}

MatchResult ExactMatcher::match(const DiscrepancyReport& pred, const DiscrepancyReport& gt) {
  std::vector<bool> taken(gt.errors.size());
  std::vector<MatchDecision> decisions;
  for (std::size_t i = 0; i < pred.errors.size(); ++i) {
    const ErrorItem& p = pred.errors[i];
    for (std::size_t j = 0; j < gt.errors.size(); ++j) {
      const ErrorItem& g = gt.errors[j];
      if (taken[j] || p.category != g.category || p.severity != g.severity || p.location != g.location) continue;
      taken[j] = true;
      decisions.push_back({i, j, MatchLevel::Yes});
      break;
    }
  }
  return complete_match(std::move(decisions), pred.errors.size(), gt.errors.size());
}

namespace {

std::string indexed_listing(const DiscrepancyReport& r) {
  std::string out;
  for (std::size_t i = 0; i < r.errors.size(); ++i)
    out += std::to_string(i) + ": " + canonical_dump(to_json(r.errors[i])) + "\n";
  return out.empty() ? "(none)\n" : out;
}

}  // namespace

RemoteMatcher::RemoteMatcher(RemoteEndpointConfig cfg, const std::filesystem::path& prompt_dir,
                             const std::atomic<bool>* cancel)
    : client_(std::move(cfg), cancel), prompt_(load_prompt(prompt_dir, "match_eval")) {}

MatchResult parse_match_answer(std::string_view text, const DiscrepancyReport& pred, const DiscrepancyReport& gt) {
  auto fail = [&](const std::string& why) -> MatchResult { throw MalformedOutput("match answer: " + why, std::string(text)); };
  const auto candidates = json_object_candidates(text);
  if (candidates.empty()) return fail("no JSON object");
  const Json& j = candidates.front();
  auto it = j.find("matches");
  if (it == j.end() || !it->is_array()) return fail("missing \"matches\" array");
  std::vector<MatchDecision> decisions;
  for (const Json& m : *it) {
    if (!m.is_object() || !m.contains("pred") || !m.contains("gt") || !m.contains("level") ||
        !m["pred"].is_number_unsigned() || !m["gt"].is_number_unsigned() || !m["level"].is_string())
      return fail("bad match entry " + m.dump());
    const std::string level = m["level"].get<std::string>();
    if (level != "yes" && level != "partial") return fail("unknown level '" + level + "'");
    decisions.push_back({m["pred"].get<std::size_t>(), m["gt"].get<std::size_t>(),
                         level == "yes" ? MatchLevel::Yes : MatchLevel::Partial});
  }
  MatchResult r = complete_match(std::move(decisions), pred.errors.size(), gt.errors.size());
  const auto v = match_violations(r, pred, gt);
  if (!v.empty()) return fail(v.front());
  return r;
}

MatchResult RemoteMatcher::match(const DiscrepancyReport& pred, const DiscrepancyReport& gt) {
  const std::string prompt = fill_template(prompt_, {{"TASK", std::string(to_string(gt.task))},
                                                     {"TAXONOMY", taxonomy_listing(gt.task)},
                                                     {"GT_ERRORS", indexed_listing(gt)},
                                                     {"PRED_ERRORS", indexed_listing(pred)}});
  const int attempts = client_.config().parse_retries + 1;
  for (int k = 0;; ++k) {
    try {
      return parse_match_answer(client_.complete(prompt, {}), pred, gt);
    } catch (const MalformedOutput&) {
      if (k + 1 >= attempts) throw;
    }
  }
}

MatchResult match_errors(const DiscrepancyReport& pred, const DiscrepancyReport& gt, Matcher& matcher) {
  if (pred.task != gt.task) throw DataError("cannot match reports of different tasks");
  if (pred.errors.empty() || gt.errors.empty()) return complete_match({}, pred.errors.size(), gt.errors.size());
  return matcher.match(pred, gt);
}

MatchCounts& MatchCounts::operator+=(const MatchCounts& o) {
  tp_hard += o.tp_hard;
  tp_soft += o.tp_soft;
  n_pred += o.n_pred;
  n_gt += o.n_gt;
  return *this;
}

MatchCounts count_matches(const MatchResult& r) {
  MatchCounts c;
  for (const auto& d : r.decisions) {
    ++c.tp_soft;
    if (d.level == MatchLevel::Yes) ++c.tp_hard;
  }
  c.n_pred = r.decisions.size() + r.unmatched_pred.size();
  c.n_gt = r.decisions.size() + r.unmatched_gt.size();
  return c;
}

Prf prf1(const MatchCounts& c, Regime regime) {
  if (c.n_pred == 0 && c.n_gt == 0) return {1.0, 1.0, 1.0};
  const double tp = static_cast<double>(regime == Regime::Hard ? c.tp_hard : c.tp_soft);
  Prf out;
  out.precision = c.n_pred == 0 ? 0.0 : tp / static_cast<double>(c.n_pred);
  out.recall = c.n_gt == 0 ? 0.0 : tp / static_cast<double>(c.n_gt);
  const double sum = out.precision + out.recall;
  out.f1 = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
  return out;
}

std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("pearson: series lengths differ");
  if (xs.empty()) throw DataError("pearson: empty series");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace verm
