#include "verm/verm.h"

#include <atomic>
#include <cstring>
#include <map>
#include <mutex>
#include <new>
#include <string>
#include <vector>

#include "verm/app/config.hpp"
#include "verm/app/pipeline.hpp"
#include "verm/core/errors.hpp"
#include "verm/corrupt/ops.hpp"
#include "verm/judge/coarse.hpp"
#include "verm/judge/judge.hpp"
#include "verm/render/codec.hpp"
#include "verm/render/render.hpp"
#include "verm/reward/reward.hpp"
#include "verm/rlkit/rlkit.hpp"
#include "verm/score/match.hpp"

struct verm_text {
  std::string value;
};

struct verm_harness {
  verm::HarnessConfig config;
  std::mutex mu;
  std::atomic<bool> cancel{false};

  verm::HarnessConfig snapshot() {
    std::lock_guard lock(mu);
    return config;
  }
};

namespace {

thread_local std::string g_last_error;

verm_status status_of(verm::ErrorKind kind) {
  switch (kind) {
    case verm::ErrorKind::Data: return VERM_ERR_DATA;
    case verm::ErrorKind::Config: return VERM_ERR_CONFIG;
    case verm::ErrorKind::Transport: return VERM_ERR_TRANSPORT;
    case verm::ErrorKind::Malformed: return VERM_ERR_MALFORMED;
    case verm::ErrorKind::Aborted: return VERM_ERR_ABORTED;
  }
  return VERM_ERR_INTERNAL;
}

verm_status fail(verm_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

template <typename Fn>
verm_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return VERM_OK;
  } catch (const verm::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const verm::Json::exception& e) {
    return fail(VERM_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VERM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VERM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VERM_ERR_INTERNAL, "unknown failure");
  }
}

void emit(verm_text** out, std::string value) {
  if (out) *out = new verm_text{std::move(value)};
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

verm::Json parse_json(const char* text, const char* what) {
  try {
    return verm::Json::parse(text);
  } catch (const verm::Json::exception& e) {
    throw verm::DataError(std::string(what) + ": " + e.what());
  }
}

verm::SeverityMap severity_map(const double* map) {
  if (!map) return {};
  verm::SeverityMap m{map[0], map[1], map[2]};
  if (!m.valid()) throw verm::ConfigError("severity map must be non-negative and strictly increasing");
  return m;
}

#define VERM_REQUIRE(cond)                                        \
  do {                                                            \
    if (!(cond)) return fail(VERM_ERR_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* verm_version(void) { return "0.1.0"; }

const char* verm_status_name(verm_status status) {
  switch (status) {
    case VERM_OK: return "ok";
    case VERM_ERR_DATA: return "data error";
    case VERM_ERR_CONFIG: return "config error";
    case VERM_ERR_TRANSPORT: return "transport error";
    case VERM_ERR_MALFORMED: return "malformed output";
    case VERM_ERR_ABORTED: return "aborted";
    case VERM_ERR_ARGUMENT: return "invalid argument";
    case VERM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* verm_last_error(void) { return g_last_error.c_str(); }

const char* verm_text_data(const verm_text* text) { return text ? text->value.c_str() : ""; }
size_t verm_text_size(const verm_text* text) { return text ? text->value.size() : 0; }
void verm_text_free(verm_text* text) { delete text; }

verm_status verm_harness_create(const char* config_json, verm_harness** out) {
  VERM_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<verm_harness>();
    if (config_json) h->config = verm::config_from_json(parse_json(config_json, "config"));
    *out = h.release();
  });
}

verm_status verm_harness_load(const char* config_path, verm_harness** out) {
  VERM_REQUIRE(config_path && out);
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<verm_harness>();
    h->config = verm::load_config(config_path);
    *out = h.release();
  });
}

void verm_harness_destroy(verm_harness* h) { delete h; }

verm_status verm_harness_update(verm_harness* h, const char* overrides_json) {
  VERM_REQUIRE(h && overrides_json);
  return guarded([&] {
    const verm::Json patch = parse_json(overrides_json, "overrides");
    if (!patch.is_object()) throw verm::ConfigError("overrides must be a JSON object");
    std::lock_guard lock(h->mu);
    verm::Json merged = verm::to_json(h->config);
    for (const auto& [k, v] : patch.items()) merged[k] = v;
    h->config = verm::config_from_json(merged);
  });
}

verm_status verm_harness_config(const verm_harness* h, verm_text** out) {
  VERM_REQUIRE(h && out);
  return guarded([&] { emit(out, verm::canonical_dump(verm::to_json(const_cast<verm_harness*>(h)->snapshot()))); });
}

void verm_harness_cancel(verm_harness* h) {
  if (h) h->cancel.store(true);
}

verm_status verm_gen(verm_harness* h, const char* task, int n, const char* out_dir, const char* doc_path,
                     const char* plan_path, verm_text** summary) {
  VERM_REQUIRE(h && task && out_dir);
  return guarded([&] {
    verm::GenRequest req;
    req.task = verm::task_from_string(task);
    req.n = n;
    req.out_dir = out_dir;
    if (doc_path) req.doc = verm::parse_doc(verm::read_text_file(doc_path));
    if (plan_path) req.plan = verm::plan_from_json(parse_json(verm::read_text_file(plan_path).c_str(), "plan"));
    emit(summary, verm::canonical_dump(verm::gen_corpus(h->snapshot(), req)));
  });
}

verm_status verm_judge_manifest(verm_harness* h, const char* manifest_path, const char* judge, verm_text** jsonl) {
  VERM_REQUIRE(h && manifest_path && judge);
  return guarded([&] {
    emit(jsonl, join_lines(verm::run_judge(h->snapshot(), manifest_path, verm::judge_kind_from_string(judge),
                                           &h->cancel)));
  });
}

verm_status verm_reward_manifest(verm_harness* h, const char* manifest_path, const char* judge, verm_text** jsonl) {
  VERM_REQUIRE(h && manifest_path && judge);
  return guarded([&] {
    emit(jsonl, join_lines(verm::run_reward(h->snapshot(), manifest_path, verm::judge_kind_from_string(judge),
                                            &h->cancel)));
  });
}

verm_status verm_score_manifest(verm_harness* h, const char* manifest_path, const char* judge, const char* matcher,
                                verm_text** json) {
  VERM_REQUIRE(h && manifest_path && judge && matcher);
  return guarded([&] {
    emit(json, verm::canonical_dump(verm::run_score(h->snapshot(), manifest_path, verm::judge_kind_from_string(judge),
                                                    verm::matcher_kind_from_string(matcher), &h->cancel)));
  });
}

verm_status verm_tts_manifest(verm_harness* h, const char* manifest_path, const char* generator, const char* judge,
                              const char* out_dir, verm_text** jsonl) {
  VERM_REQUIRE(h && manifest_path && generator && judge && out_dir);
  return guarded([&] {
    emit(jsonl, join_lines(verm::run_tts(h->snapshot(), manifest_path, verm::generator_kind_from_string(generator),
                                         verm::judge_kind_from_string(judge), out_dir, &h->cancel)));
  });
}

verm_status verm_rl_sim(verm_harness* h, const char* manifest_path, const char* task, int n, const char* judge,
                        verm_text** json) {
  VERM_REQUIRE(h && judge && (manifest_path || task));
  return guarded([&] {
    std::optional<std::filesystem::path> manifest;
    if (manifest_path) manifest = manifest_path;
    const verm::TaskKind t = task ? verm::task_from_string(task) : verm::TaskKind::Chart;
    emit(json, verm::canonical_dump(
                   verm::run_rl_sim(h->snapshot(), manifest, t, n, verm::judge_kind_from_string(judge), &h->cancel)));
  });
}

verm_status verm_validate(const char* path, int* valid, verm_text** json) {
  VERM_REQUIRE(path);
  return guarded([&] {
    const verm::ValidationSummary v = verm::validate_path(path);
    if (valid) *valid = v.ok() ? 1 : 0;
    verm::Json j = verm::to_json(v);
    j["path"] = path;
    emit(json, verm::canonical_dump(j));
  });
}

verm_status verm_render(const char* doc_json, const char* png_path, int* rendered, uint64_t* content_hash,
                        verm_text** diagnostic) {
  VERM_REQUIRE(doc_json && rendered);
  return guarded([&] {
    const verm::RenderResult r = verm::render(verm::parse_doc(doc_json));
    *rendered = r.success() ? 1 : 0;
    if (!r.success()) {
      emit(diagnostic, r.diagnostic());
      return;
    }
    if (content_hash) *content_hash = r.image().content_hash();
    if (png_path) verm::write_png(png_path, r.image());
  });
}

verm_status verm_oracle_judge(const char* gt_doc_json, const char* pred_doc_json, verm_text** report_json) {
  VERM_REQUIRE(gt_doc_json && pred_doc_json && report_json);
  return guarded([&] {
    verm::JudgeInput in;
    in.gt_doc = verm::parse_doc(gt_doc_json);
    in.pred_doc = verm::parse_doc(pred_doc_json);
    in.task = in.gt_doc->task;
    emit(report_json, verm::canonical_dump(verm::to_json(verm::oracle_judge(in).report)));
  });
}

verm_status verm_apply_plan(const char* doc_json, const char* plan_json, verm_text** pair_json) {
  VERM_REQUIRE(doc_json && plan_json && pair_json);
  return guarded([&] {
    const auto plan = verm::plan_from_json(parse_json(plan_json, "plan"));
    emit(pair_json, verm::canonical_dump(verm::to_json(verm::apply_edits(verm::parse_doc(doc_json), plan))));
  });
}

verm_status verm_coarse_similarity(const char* gt_png_path, const char* pred_png_path, double* out) {
  VERM_REQUIRE(gt_png_path && pred_png_path && out);
  return guarded([&] { *out = verm::coarse_similarity(verm::read_png(gt_png_path), verm::read_png(pred_png_path)); });
}

verm_status verm_severity_sum(const char* report_json, const double* map, double* out) {
  VERM_REQUIRE(report_json && out);
  return guarded([&] {
    const verm::DiscrepancyReport r = verm::report_from_json(parse_json(report_json, "report"));
    const auto v = verm::validate_report(r);
    if (!v.ok()) throw verm::DataError("invalid report: " + v.violations.front());
    *out = verm::severity_sum(r, severity_map(map));
  });
}

verm_status verm_verm_reward(double s, double max_severity, double epsilon, double* out) {
  VERM_REQUIRE(out && s >= 0.0 && max_severity >= 0.0 && epsilon > 0.0);
  *out = verm::verm_reward(s, verm::Normalizer{"caller", max_severity, epsilon});
  return VERM_OK;
}

verm_status verm_combined_reward(int render_ok, const char* report_json, double max_severity, double epsilon,
                                 const double* map, verm_text** breakdown_json) {
  VERM_REQUIRE(breakdown_json && max_severity >= 0.0 && epsilon > 0.0);
  return guarded([&] {
    std::optional<verm::JudgeVerdict> verdict;
    if (report_json) verdict = verm::JudgeVerdict{verm::report_from_json(parse_json(report_json, "report")), {}};
    const auto b = verm::combined_reward(render_ok != 0, verdict, verm::Normalizer{"caller", max_severity, epsilon},
                                         severity_map(map));
    emit(breakdown_json, verm::canonical_dump(verm::to_json(b)));
  });
}

verm_status verm_levenshtein(const char* a, const char* b, size_t* out) {
  VERM_REQUIRE(a && b && out);
  *out = verm::levenshtein(a, b);
  return VERM_OK;
}

verm_status verm_grpo_advantages(const double* rewards, size_t n, double* out) {
  VERM_REQUIRE((rewards && out) || n == 0);
  return guarded([&] {
    const auto a = verm::grpo_advantages(std::span(rewards, n));
    std::copy(a.begin(), a.end(), out);
  });
}

verm_status verm_rl_objective(const double* policy, const double* ref, const double* rewards, size_t n, double beta,
                              double* out) {
  VERM_REQUIRE(policy && ref && rewards && out && n > 0);
  return guarded([&] {
    verm::ToyPolicy p, q;
    std::map<std::string, double> r;
    for (size_t i = 0; i < n; ++i) {
      const std::string sym = std::to_string(i);
      p.alphabet.push_back(sym);
      q.alphabet.push_back(sym);
      p.probs.push_back(policy[i]);
      q.probs.push_back(ref[i]);
      r[sym] = rewards[i];
    }
    *out = verm::eval_rl_objective(p, q, r, beta);
  });
}

verm_status verm_prf1(size_t tp, size_t n_pred, size_t n_gt, double* out) {
  VERM_REQUIRE(out && tp <= n_pred && tp <= n_gt);
  const verm::Prf p = verm::prf1(verm::MatchCounts{tp, tp, n_pred, n_gt}, verm::Regime::Hard);
  out[0] = p.precision;
  out[1] = p.recall;
  out[2] = p.f1;
  return VERM_OK;
}

verm_status verm_pearson(const double* xs, const double* ys, size_t n, double* out, int* defined) {
  VERM_REQUIRE(xs && ys && out && defined);
  return guarded([&] {
    const auto r = verm::pearson(std::span(xs, n), std::span(ys, n));
    *defined = r ? 1 : 0;
    *out = r.value_or(0.0);
  });
}

}  // extern "C"
