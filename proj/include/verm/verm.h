#ifndef VERM_VERM_H
#define VERM_VERM_H

#include <stddef.h>
#include <stdint.h>

#if defined(VERM_BUILDING_LIBRARY)
#define VERM_API __attribute__((visibility("default")))
#else
#define VERM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum verm_status {
  VERM_OK = 0,
  VERM_ERR_DATA = 1,       /* malformed input, unresolvable locator, failed validation */
  VERM_ERR_CONFIG = 2,     /* bad configuration or missing credentials */
  VERM_ERR_TRANSPORT = 3,  /* endpoint or sidecar unreachable after retries */
  VERM_ERR_MALFORMED = 4,  /* a remote model answered with nothing usable */
  VERM_ERR_ABORTED = 5,    /* cancelled, or the failure budget was exceeded */
  VERM_ERR_ARGUMENT = 6,   /* NULL or out-of-range argument */
  VERM_ERR_INTERNAL = 7
} verm_status;

/* Configured pipeline state. Safe to share across threads for the run
 * functions; create and destroy are not concurrent with anything. */
typedef struct verm_harness verm_harness;

/* Library-owned text result. Always NUL-terminated. */
typedef struct verm_text verm_text;

VERM_API const char* verm_version(void);
VERM_API const char* verm_status_name(verm_status status);

/* Message of the most recent failure on the calling thread. */
VERM_API const char* verm_last_error(void);

VERM_API const char* verm_text_data(const verm_text* text);
VERM_API size_t verm_text_size(const verm_text* text);
VERM_API void verm_text_free(verm_text* text);

/* config_json may be NULL for defaults. Unknown keys are rejected. */
VERM_API verm_status verm_harness_create(const char* config_json, verm_harness** out);
VERM_API verm_status verm_harness_load(const char* config_path, verm_harness** out);
VERM_API void verm_harness_destroy(verm_harness* h);

/* Merges the keys of a JSON object into the configuration and
 * revalidates it. The configuration is unchanged on failure. */
VERM_API verm_status verm_harness_update(verm_harness* h, const char* overrides_json);
VERM_API verm_status verm_harness_config(const verm_harness* h, verm_text** out);

/* Requests cancellation; in-flight remote requests finish, new ones are
 * refused. Async-signal-safe. */
VERM_API void verm_harness_cancel(verm_harness* h);

/* ---- pipeline ---------------------------------------------------------- */

/* Corpus generation into out_dir. doc_path and plan_path may be NULL; a
 * plan requires a doc. *summary receives {"written","skipped","digest"}. */
VERM_API verm_status verm_gen(verm_harness* h, const char* task, int n, const char* out_dir, const char* doc_path,
                              const char* plan_path, verm_text** summary);

/* judge: "oracle", "remote" or "coarse". One JSON line per entry. */
VERM_API verm_status verm_judge_manifest(verm_harness* h, const char* manifest_path, const char* judge,
                                         verm_text** jsonl);

/* judge: "oracle" or "remote". One RewardBreakdown line per entry. */
VERM_API verm_status verm_reward_manifest(verm_harness* h, const char* manifest_path, const char* judge,
                                          verm_text** jsonl);

/* matcher: "exact" or "remote". *json receives the metrics report. */
VERM_API verm_status verm_score_manifest(verm_harness* h, const char* manifest_path, const char* judge,
                                         const char* matcher, verm_text** json);

/* generator: "oracle-repair", "identity" or "remote". Traces go to
 * out_dir; *jsonl receives one summary line per entry. */
VERM_API verm_status verm_tts_manifest(verm_harness* h, const char* manifest_path, const char* generator,
                                       const char* judge, const char* out_dir, verm_text** jsonl);

/* Corpus from the manifest's gt docs, or n random docs of task when
 * manifest_path is NULL. */
VERM_API verm_status verm_rl_sim(verm_harness* h, const char* manifest_path, const char* task, int n,
                                 const char* judge, verm_text** json);

/* *valid is 1 when the path passed every check. */
VERM_API verm_status verm_validate(const char* path, int* valid, verm_text** json);

/* ---- documents and images ---------------------------------------------- */

/* *rendered is 0 for an invalid doc, with the reason in *diagnostic
 * (which may be NULL). png_path may be NULL. */
VERM_API verm_status verm_render(const char* doc_json, const char* png_path, int* rendered, uint64_t* content_hash,
                                 verm_text** diagnostic);

VERM_API verm_status verm_oracle_judge(const char* gt_doc_json, const char* pred_doc_json, verm_text** report_json);

VERM_API verm_status verm_apply_plan(const char* doc_json, const char* plan_json, verm_text** pair_json);

VERM_API verm_status verm_coarse_similarity(const char* gt_png_path, const char* pred_png_path, double* out);

/* ---- reward, RL and scoring math --------------------------------------- */

/* map is {minor, moderate, critical}; NULL means {1, 2, 3}. */
VERM_API verm_status verm_severity_sum(const char* report_json, const double* map, double* out);

VERM_API verm_status verm_verm_reward(double s, double max_severity, double epsilon, double* out);

/* report_json may be NULL when render_ok is 0. */
VERM_API verm_status verm_combined_reward(int render_ok, const char* report_json, double max_severity,
                                          double epsilon, const double* map, verm_text** breakdown_json);

VERM_API verm_status verm_levenshtein(const char* a, const char* b, size_t* out);

/* out must hold n values. */
VERM_API verm_status verm_grpo_advantages(const double* rewards, size_t n, double* out);

/* Probability vectors over outputs 0..n-1. */
VERM_API verm_status verm_rl_objective(const double* policy, const double* ref, const double* rewards, size_t n,
                                       double beta, double* out);

/* hard: tp = yes matches; soft: tp = yes + partial. out = {P, R, F1}. */
VERM_API verm_status verm_prf1(size_t tp, size_t n_pred, size_t n_gt, double* out);

/* *defined is 0 when either series has zero variance. */
VERM_API verm_status verm_pearson(const double* xs, const double* ys, size_t n, double* out, int* defined);

#ifdef __cplusplus
}
#endif

#endif
