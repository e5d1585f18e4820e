#include "verm/app/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "verm/core/errors.hpp"
#include "verm/core/parallel.hpp"
#include "verm/corrupt/export.hpp"
#include "verm/corrupt/sample.hpp"
#include "verm/judge/coarse.hpp"
#include "verm/judge/remote.hpp"
#include "verm/render/codec.hpp"
#include "verm/render/render.hpp"
#include "verm/reward/reward.hpp"
#include "verm/rlkit/rlkit.hpp"
#include "verm/score/bench.hpp"
#include "verm/tts/tts.hpp"

namespace verm {

namespace fs = std::filesystem;

DocRenderer::DocRenderer(const std::optional<SidecarConfig>& sidecar) {
  if (sidecar) pool_ = std::make_unique<SidecarPool>(*sidecar);
}

RenderResult DocRenderer::render(const StructuredDoc& doc) {
  if (pool_ && doc.raw_code) return render_via_plugin(doc, *pool_);
  return verm::render(doc);
}

JudgeKind judge_kind_from_string(std::string_view text) {
  if (text == "oracle") return JudgeKind::Oracle;
  if (text == "remote") return JudgeKind::Remote;
  if (text == "coarse") return JudgeKind::Coarse;
  throw ConfigError("unknown judge '" + std::string(text) + "'");
}

MatcherKind matcher_kind_from_string(std::string_view text) {
  if (text == "exact") return MatcherKind::Exact;
  if (text == "remote") return MatcherKind::Remote;
  throw ConfigError("unknown matcher '" + std::string(text) + "'");
}

GeneratorKind generator_kind_from_string(std::string_view text) {
  if (text == "oracle-repair") return GeneratorKind::OracleRepair;
  if (text == "identity") return GeneratorKind::Identity;
  if (text == "remote") return GeneratorKind::Remote;
  throw ConfigError("unknown generator '" + std::string(text) + "'");
}

namespace {

fs::path prompt_dir_of(const HarnessConfig& cfg) {
  return cfg.prompt_dir ? fs::path(*cfg.prompt_dir) : default_prompt_dir();
}

void check_cancel(const std::atomic<bool>* cancel) {
  if (cancel && cancel->load()) throw AbortedError("cancelled");
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_id(TaskKind task, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04d", std::string(to_string(task)).c_str(), i);
  return buf;
}

PairInstance make_instance(const HarnessConfig& cfg, const GenRequest& req, int i) {
  Rng rng = Rng(cfg.seed).split(static_cast<std::uint64_t>(i));
  StructuredDoc doc = req.doc ? *req.doc : random_doc(req.task, rng);
  PairInstance inst;
  if (req.plan) {
    inst = apply_edits(doc, *req.plan);
  } else if (cfg.gen.route == GenRoute::Infer) {
    inst = sample_infer(doc, cfg.gen.noise, rng.next());
  } else {
    int k = rng.range(cfg.gen.min_ops, cfg.gen.max_ops);
    for (;; --k) {
      Rng attempt = rng;
      try {
        inst = apply_edits(doc, plan_ops(doc, k, attempt));
        break;
      } catch (const DataError&) {
        if (k <= 1) throw;
      }
    }
  }
  inst.id = instance_id(doc.task, i);
  inst.seed = rng.seed();
  return inst;
}

void write_file(const fs::path& path, std::string_view text) {
  fs::create_directories(path.parent_path());
  write_text_file(path, text);
}

std::string_view kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Data: return "data";
    case ErrorKind::Config: return "config";
    case ErrorKind::Transport: return "transport";
    case ErrorKind::Malformed: return "malformed";
    case ErrorKind::Aborted: return "aborted";
  }
  return "data";
}

Json failure_json(const ManifestEntry& e, const Error& err) {
  Json j{{"id", e.id}, {"task", std::string(to_string(e.task))}, {"error", err.what()},
         {"error_kind", std::string(kind_name(err.kind()))}};
  if (const auto* m = dynamic_cast<const MalformedOutput*>(&err)) j["raw"] = m->raw();
  return j;
}

/// Runs fn per entry, turning non-abort failures into error lines.
template <typename Fn>
std::vector<std::string> per_entry(const BenchManifest& m, std::size_t max_parallel, const std::atomic<bool>* cancel,
                                   Fn&& fn) {
  std::vector<std::string> lines(m.entries.size());
  parallel_for(m.entries.size(), max_parallel, [&](std::size_t i) {
    check_cancel(cancel);
    try {
      lines[i] = fn(m.entries[i]);
    } catch (const AbortedError&) {
      throw;
    } catch (const Error& err) {
      lines[i] = canonical_dump(failure_json(m.entries[i], err));
    }
  });
  return lines;
}

BenchManifest checked_manifest(const fs::path& path) {
  BenchManifest m = load_manifest(path);
  const auto v = manifest_violations(m);
  if (!v.empty()) throw DataError("manifest " + path.string() + ": " + v.front());
  return m;
}

}  // namespace

std::unique_ptr<Judge> make_judge(const HarnessConfig& cfg, JudgeKind kind, const std::atomic<bool>* cancel) {
  switch (kind) {
    case JudgeKind::Oracle: return std::make_unique<OracleJudge>();
    case JudgeKind::Remote:
      if (!cfg.judge_endpoint) throw ConfigError("remote judge needs judge_endpoint in the config");
      return std::make_unique<RemoteJudge>(*cfg.judge_endpoint, prompt_dir_of(cfg), cancel);
    case JudgeKind::Coarse: break;
  }
  throw ConfigError("the coarse judge yields similarities, not reports");
}

std::unique_ptr<Matcher> make_matcher(const HarnessConfig& cfg, MatcherKind kind, const std::atomic<bool>* cancel) {
  if (kind == MatcherKind::Exact) return std::make_unique<ExactMatcher>();
  if (!cfg.matcher_endpoint) throw ConfigError("remote matcher needs matcher_endpoint in the config");
  return std::make_unique<RemoteMatcher>(*cfg.matcher_endpoint, prompt_dir_of(cfg), cancel);
}

Json gen_corpus(const HarnessConfig& cfg, const GenRequest& req) {
  validate_config(cfg);
  if (req.n < 0) throw ConfigError("n must be non-negative");
  if (req.doc && req.doc->task != req.task) throw ConfigError("--doc does not match --task");
  if (req.plan && !req.doc) throw ConfigError("a plan needs an explicit doc");

  std::vector<PairInstance> instances;
  for (int i = 0; i < req.n; ++i) instances.push_back(make_instance(cfg, req, i));

  fs::create_directories(req.out_dir);
  const std::size_t written = export_sft_records(instances, req.out_dir);

  BenchManifest manifest;
  ManifestHeader header;
  std::uint64_t digest = fnv1a("verm-corpus");
  Json hashes = Json::array();
  for (const auto& inst : instances) {
    const RenderResult gt_render = render(inst.gt_doc);
    const RenderResult pred_render = render(inst.pred_doc);
    if (!gt_render.success() || !pred_render.success()) continue;
    const RasterImage& gt_image = gt_render.image();
    const RasterImage& pred_image = pred_render.image();
    const std::string gt_text = canonical_serialize(inst.gt_doc);
    const std::string pred_text = canonical_serialize(inst.pred_doc);
    write_file(req.out_dir / "docs" / (inst.id + "_gt.json"), gt_text + "\n");
    write_file(req.out_dir / "docs" / (inst.id + "_pred.json"), pred_text + "\n");
    ManifestEntry e{inst.id,
                    inst.task,
                    "images/" + inst.id + "_gt.png",
                    "images/" + inst.id + "_pred.png",
                    inst.gt_report,
                    "docs/" + inst.id + "_gt.json",
                    "docs/" + inst.id + "_pred.json"};
    ++header.stats[inst.task];
    ++header.total;
    manifest.entries.push_back(std::move(e));
    const std::string report_text = canonical_dump(to_json(inst.gt_report));
    for (std::string_view part : {std::string_view(inst.id), std::string_view(gt_text), std::string_view(pred_text),
                                  std::string_view(report_text)})
      digest = fnv1a(part, fnv1a("\n", digest));
    digest = fnv1a(hash_hex(gt_image.content_hash()) + hash_hex(pred_image.content_hash()), digest);
    hashes.push_back({{"id", inst.id},
                      {"gt_hash", hash_hex(gt_image.content_hash())},
                      {"pred_hash", hash_hex(pred_image.content_hash())}});
  }
  manifest.header = header;
  write_file(req.out_dir / "manifest.jsonl", dump_manifest(manifest));
  Json summary{{"written", written}, {"skipped", instances.size() - written}, {"digest", hash_hex(digest)}};
  write_file(req.out_dir / "corpus.json",
             canonical_dump(Json{{"digest", hash_hex(digest)}, {"instances", hashes}}) + "\n");
  return summary;
}

std::vector<std::string> run_judge(const HarnessConfig& cfg, const fs::path& manifest_path, JudgeKind kind,
                                   const std::atomic<bool>* cancel) {
  const BenchManifest m = checked_manifest(manifest_path);
  std::unique_ptr<Judge> judge;
  if (kind != JudgeKind::Coarse) judge = make_judge(cfg, kind, cancel);
  return per_entry(m, cfg.max_parallel, cancel, [&](const ManifestEntry& e) {
    const JudgeInput in = load_judge_input(m, e);
    Json j{{"id", e.id}, {"task", std::string(to_string(e.task))}};
    if (kind == JudgeKind::Coarse) {
      j["coarse_similarity"] = coarse_similarity(in.gt_image, in.pred_image);
    } else {
      const JudgeVerdict v = judge->judge(in);
      j["report"] = to_json(v.report);
      if (v.raw) j["raw"] = *v.raw;
    }
    return canonical_dump(j);
  });
}

std::vector<std::string> run_reward(const HarnessConfig& cfg, const fs::path& manifest_path, JudgeKind kind,
                                    const std::atomic<bool>* cancel) {
  const BenchManifest m = checked_manifest(manifest_path);
  auto judge = make_judge(cfg, kind, cancel);
  DocRenderer renderer(cfg.sidecar);
  const NormScope scope = cfg.norm_scope.value_or(NormScope::Batch);

  struct Judged {
    bool render_ok = false;
    std::optional<JudgeVerdict> verdict;
    std::optional<std::string> failure;
  };
  std::vector<Judged> judged(m.entries.size());
  parallel_for(m.entries.size(), cfg.max_parallel, [&](std::size_t i) {
    check_cancel(cancel);
    const ManifestEntry& e = m.entries[i];
    try {
      JudgeInput in;
      in.task = e.task;
      in.gt_image = read_png(m.base_dir / e.gt_png);
      if (e.gt_doc) in.gt_doc = parse_doc(read_text_file(m.base_dir / *e.gt_doc));
      if (e.pred_doc) {
        in.pred_doc = parse_doc(read_text_file(m.base_dir / *e.pred_doc));
        RenderResult r = renderer.render(*in.pred_doc);
        if (!r.success()) return;
        in.pred_image = r.image();
      } else {
        in.pred_image = read_png(m.base_dir / e.pred_png);
      }
      judged[i].render_ok = true;
      judged[i].verdict = judge->judge(in);
    } catch (const AbortedError&) {
      throw;
    } catch (const Error& err) {
      judged[i].failure = canonical_dump(failure_json(e, err));
    }
  });

  auto group_key = [&](const ManifestEntry& e) {
    std::string key(to_string(e.task));
    if (scope == NormScope::Group) key += ":" + (e.gt_doc ? *e.gt_doc : e.gt_png);
    return key;
  };
  std::map<std::string, std::vector<double>> sums;
  for (std::size_t i = 0; i < m.entries.size(); ++i)
    if (judged[i].verdict) sums[group_key(m.entries[i])].push_back(severity_sum(judged[i].verdict->report, cfg.severity));
  std::map<std::string, Normalizer> norms;
  for (const auto& [key, s] : sums)
    norms[key] = fit_normalizer(s, cfg.epsilon, std::string(to_string(scope)) + ":" + key);

  std::vector<std::string> lines;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const ManifestEntry& e = m.entries[i];
    if (judged[i].failure) {
      lines.push_back(*judged[i].failure);
      continue;
    }
    const std::string key = group_key(e);
    const Normalizer norm = norms.count(key) ? norms.at(key) : Normalizer{std::string(to_string(scope)) + ":" + key, 0.0, cfg.epsilon};
    const RewardBreakdown b = combined_reward(judged[i].render_ok, judged[i].verdict, norm, cfg.severity);
    Json j{{"id", e.id},
           {"task", std::string(to_string(e.task))},
           {"render_ok", judged[i].render_ok},
           {"breakdown", to_json(b)},
           {"normalizer", to_json(norm)}};
    if (judged[i].verdict) j["report"] = to_json(judged[i].verdict->report);
    lines.push_back(canonical_dump(j));
  }
  return lines;
}

Json run_score(const HarnessConfig& cfg, const fs::path& manifest_path, JudgeKind judge_kind,
               MatcherKind matcher_kind, const std::atomic<bool>* cancel) {
  const BenchManifest m = checked_manifest(manifest_path);
  auto judge = make_judge(cfg, judge_kind, cancel);
  auto matcher = make_matcher(cfg, matcher_kind, cancel);
  const BenchMetrics metrics = score_benchmark(m, *judge, *matcher, cfg.severity, {cfg.max_parallel, 0.10});
  Json j = to_json(metrics);
  j["judge"] = judge->name();
  j["matcher"] = matcher->name();
  Json failures = Json::array();
  for (const auto& s : metrics.instances)
    if (s.error_kind)
      failures.push_back({{"id", s.id}, {"error", s.error}, {"error_kind", std::string(kind_name(*s.error_kind))}});
  j["failed_instances"] = failures;
  return j;
}

std::vector<std::string> run_tts(const HarnessConfig& cfg, const fs::path& manifest_path, GeneratorKind gen_kind,
                                 JudgeKind judge_kind, const fs::path& out_dir, const std::atomic<bool>* cancel) {
  const BenchManifest m = checked_manifest(manifest_path);
  auto judge = make_judge(cfg, judge_kind, cancel);
  if (gen_kind == GeneratorKind::Remote && !cfg.generator_endpoint)
    throw ConfigError("remote generator needs generator_endpoint in the config");
  fs::create_directories(out_dir);
  ReflectionOptions opts;
  opts.rounds = cfg.rounds;
  opts.stop_threshold = cfg.stop_threshold;
  opts.severity = cfg.severity;
  opts.epsilon = cfg.epsilon;

  return per_entry(m, cfg.max_parallel, cancel, [&](const ManifestEntry& e) {
    PairContext ctx;
    ctx.task = e.task;
    ctx.gt_image = read_png(m.base_dir / e.gt_png);
    if (e.gt_doc) ctx.gt_doc = parse_doc(read_text_file(m.base_dir / *e.gt_doc));
    std::optional<StructuredDoc> start;
    if (e.pred_doc) start = parse_doc(read_text_file(m.base_dir / *e.pred_doc));
    std::unique_ptr<Generator> gen;
    switch (gen_kind) {
      case GeneratorKind::OracleRepair:
        if (!ctx.gt_doc || !start) throw DataError("oracle-repair needs gt_doc and pred_doc");
        gen = std::make_unique<OracleRepairGenerator>(*ctx.gt_doc, *start);
        break;
      case GeneratorKind::Identity:
        if (!start) throw DataError("identity generator needs pred_doc");
        gen = std::make_unique<IdentityReviser>(*start);
        break;
      case GeneratorKind::Remote:
        gen = std::make_unique<RemoteGenerator>(e.task, *cfg.generator_endpoint, prompt_dir_of(cfg), cancel);
        break;
    }
    Json j{{"id", e.id}, {"task", std::string(to_string(e.task))}};
    try {
      const ReflectionTrace trace = run_reflection(ctx, *gen, *judge, opts);
      std::string text;
      for (const auto& line : write_trace(trace, out_dir, e.id)) text += line + "\n";
      write_file(out_dir / (e.id + ".jsonl"), text);
      const ReflectionStep& last = trace.steps.back();
      j["steps"] = trace.steps.size();
      j["stop_reason"] = std::string(to_string(*last.stop_reason));
      j["best_step"] = trace.best_step;
      j["best_total"] = trace.steps[trace.best_step].breakdown.total;
      j["final_total"] = last.breakdown.total;
      j["trace"] = e.id + ".jsonl";
    } catch (const ReflectionError& err) {
      std::string text;
      for (const auto& line : write_trace(err.partial(), out_dir, e.id)) text += line + "\n";
      write_file(out_dir / (e.id + ".jsonl"), text);
      if (err.kind() == ErrorKind::Aborted) throw AbortedError(err.what());
      j.update(failure_json(e, err));
      j["steps"] = err.partial().steps.size();
      try {
        std::rethrow_exception(err.cause());
      } catch (const MalformedOutput& mo) {
        j["raw"] = mo.raw();
      } catch (...) {
      }
    }
    return canonical_dump(j);
  });
}

Json run_rl_sim(const HarnessConfig& cfg, const std::optional<fs::path>& manifest_path, TaskKind task, int n,
                JudgeKind judge_kind, const std::atomic<bool>* cancel) {
  std::vector<StructuredDoc> corpus;
  if (manifest_path) {
    const BenchManifest m = checked_manifest(*manifest_path);
    std::set<std::string> seen;
    for (const auto& e : m.entries) {
      if (!e.gt_doc) throw DataError("entry " + e.id + " has no gt_doc");
      if (seen.insert(*e.gt_doc).second) corpus.push_back(parse_doc(read_text_file(m.base_dir / *e.gt_doc)));
    }
  } else {
    if (n < 0) throw ConfigError("n must be non-negative");
    for (int i = 0; i < n; ++i) {
      Rng rng = Rng(cfg.seed).split(static_cast<std::uint64_t>(i));
      corpus.push_back(random_doc(task, rng));
    }
  }
  auto judge = make_judge(cfg, judge_kind, cancel);
  SimOptions opts;
  opts.group_size = cfg.group_size;
  opts.scope = cfg.norm_scope.value_or(NormScope::Group);
  opts.epsilon = cfg.epsilon;
  opts.severity = cfg.severity;
  opts.render_fail_rate = cfg.render_fail_rate;
  opts.max_parallel = cfg.max_parallel;
  check_cancel(cancel);
  Json j = to_json(simulate_policy_improvement(corpus, cfg.noise_levels, *judge, cfg.seed, opts));
  j["group_size"] = cfg.group_size;
  j["norm_scope"] = std::string(to_string(opts.scope));
  j["corpus_size"] = corpus.size();
  return j;
}

Json to_json(const ValidationSummary& v) {
  return Json{{"kind", v.kind}, {"ok", v.ok()}, {"violations", v.violations}};
}

namespace {

void check_png(const fs::path& base, const std::string& rel, const std::string& who, std::vector<std::string>& out) {
  const fs::path p = base / rel;
  if (!fs::exists(p)) {
    out.push_back(who + ": missing " + rel);
    return;
  }
  try {
    (void)read_png(p);
  } catch (const Error& e) {
    out.push_back(who + ": " + rel + ": " + e.what());
  }
}

void validate_manifest(const BenchManifest& m, std::vector<std::string>& out) {
  for (const auto& v : manifest_violations(m)) out.push_back(v);
  for (const auto& e : m.entries) {
    const std::string who = "entry " + e.id;
    check_png(m.base_dir, e.gt_png, who, out);
    check_png(m.base_dir, e.pred_png, who, out);
    for (const auto* rel : {&e.gt_doc, &e.pred_doc}) {
      if (!*rel) continue;
      try {
        const StructuredDoc d = parse_doc(read_text_file(m.base_dir / **rel));
        if (d.task != e.task) out.push_back(who + ": " + **rel + " is a " + std::string(to_string(d.task)) + " doc");
      } catch (const Error& err) {
        out.push_back(who + ": " + **rel + ": " + err.what());
      }
    }
  }
}

void validate_sft(std::string_view text, const fs::path& base, std::vector<std::string>& out) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::set<std::string> ids;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    try {
      const SftRecord r = sft_record_from_json(Json::parse(line));
      if (!ids.insert(r.id).second) out.push_back("record " + r.id + ": duplicate id");
      for (const auto& v : validate_report(r.annotation).violations) out.push_back("record " + r.id + ": " + v);
      check_png(base, r.gt_png, "record " + r.id, out);
      check_png(base, r.pred_png, "record " + r.id, out);
    } catch (const std::exception& e) {
      out.push_back("sft line " + std::to_string(n) + ": " + e.what());
    }
  }
}

bool looks_like_sft(std::string_view text) {
  const auto nl = text.find('\n');
  try {
    const Json j = Json::parse(text.substr(0, nl));
    return j.is_object() && j.contains("annotation");
  } catch (const Json::exception&) {
    return false;
  }
}

}  // namespace

ValidationSummary validate_path(const fs::path& path) {
  ValidationSummary s;
  if (!fs::exists(path)) {
    s.kind = "missing";
    s.violations.push_back("no such file or directory: " + path.string());
    return s;
  }
  if (fs::is_directory(path)) {
    s.kind = "corpus";
    const fs::path mpath = path / "manifest.jsonl";
    if (!fs::exists(mpath)) {
      s.violations.push_back("missing manifest.jsonl");
      return s;
    }
    try {
      BenchManifest m = load_manifest(mpath);
      validate_manifest(m, s.violations);
      std::set<std::string> ids;
      for (const auto& e : m.entries) ids.insert(e.id);
      if (fs::exists(path / "sft.jsonl")) {
        const std::string sft = read_text_file(path / "sft.jsonl");
        validate_sft(sft, path, s.violations);
        std::istringstream in(sft);
        std::string line;
        std::size_t records = 0;
        while (std::getline(in, line))
          if (!line.empty()) ++records;
        if (records != m.entries.size())
          s.violations.push_back("sft.jsonl has " + std::to_string(records) + " records, manifest has " +
                                 std::to_string(m.entries.size()));
      }
      if (fs::exists(path / "corpus.json")) {
        const Json c = Json::parse(read_text_file(path / "corpus.json"));
        if (!c.is_object() || !c.contains("digest") || !c.contains("instances") || !c["instances"].is_array()) {
          s.violations.push_back("corpus.json: missing digest or instances");
        } else {
          for (const auto& inst : c["instances"]) {
            const std::string id = inst.value("id", "");
            if (!ids.count(id)) {
              s.violations.push_back("corpus.json: unknown id '" + id + "'");
              continue;
            }
            const fs::path gt = path / "images" / (id + "_gt.png");
            const fs::path pred = path / "images" / (id + "_pred.png");
            if (fs::exists(gt) && hash_hex(read_png(gt).content_hash()) != inst.value("gt_hash", ""))
              s.violations.push_back("corpus.json: " + id + " gt image hash differs");
            if (fs::exists(pred) && hash_hex(read_png(pred).content_hash()) != inst.value("pred_hash", ""))
              s.violations.push_back("corpus.json: " + id + " pred image hash differs");
          }
        }
      }
    } catch (const std::exception& e) {
      s.violations.push_back(e.what());
    }
    return s;
  }

  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    s.kind = "unreadable";
    s.violations.push_back(e.what());
    return s;
  }
  if (path.extension() == ".jsonl") {
    if (looks_like_sft(text)) {
      s.kind = "sft";
      validate_sft(text, path.parent_path(), s.violations);
    } else {
      s.kind = "manifest";
      try {
        validate_manifest(parse_manifest(text, path.parent_path()), s.violations);
      } catch (const Error& e) {
        s.violations.push_back(e.what());
      }
    }
    return s;
  }

  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    s.kind = "json";
    s.violations.push_back(e.what());
    return s;
  }
  try {
    if (j.is_object() && j.contains("task") && j.contains("body")) {
      s.kind = "doc";
      for (const auto& v : doc_violations(doc_from_json(j))) s.violations.push_back(v);
    } else if (j.is_object() && j.contains("errors")) {
      s.kind = "report";
      for (const auto& v : validate_report(report_from_json(j)).violations) s.violations.push_back(v);
    } else if (j.is_array() || (j.is_object() && j.contains("ops"))) {
      s.kind = "plan";
      (void)plan_from_json(j);
    } else {
      s.kind = "config";
      (void)config_from_json(j);
    }
  } catch (const Error& e) {
    s.violations.push_back(e.what());
  }
  return s;
}

}  // namespace verm
