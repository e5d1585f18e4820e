#include "verm/tts/tts.hpp"

#include <algorithm>

#include "verm/judge/diff.hpp"
#include "verm/render/codec.hpp"
#include "verm/render/render.hpp"

namespace verm {

StructuredDoc OracleRepairGenerator::revise(const RasterImage&, const StructuredDoc& prev,
                                            const DiscrepancyReport& feedback) {
  if (feedback.errors.empty()) return prev;
  auto worst = feedback.errors.begin();
  for (auto it = feedback.errors.begin(); it != feedback.errors.end(); ++it)
    if (it->severity > worst->severity) worst = it;
  return revert_error(prev, gt_, *worst);
}

std::string doc_schema(TaskKind task) {
  switch (task) {
    case TaskKind::Chart:
      return R"({"task":"chart","body":{"width":int,"height":int,"title":string,"legend":bool,)"
             R"("tick_labels":[string],"series":[{"kind":"bar"|"line"|"scatter","label":string,)"
             R"("color":"#rrggbb","points":[{"x":number,"y":number}]}]}})";
    case TaskKind::Table:
      return R"({"task":"table","body":{"rows":int,"cols":int,"align":["left"|"center"|"right"],)"
             R"("cells":[{"row":int,"col":int,"rowspan":int,"colspan":int,"text":string}]}})";
    case TaskKind::Svg:
      return R"({"task":"svg","body":{"width":int,"height":int,"background":"#rrggbb",)"
             R"("groups":[{"id":int,"dx":number,"dy":number}],"primitives":[{"kind":)"
             R"("rect"|"circle"|"line"|"polyline"|"text","id":string,"group":int,...geometry,)"
             R"("fill":"#rrggbb","stroke":"#rrggbb","stroke_width":number,"opacity":number}]}})";
  }
  return {};
}

StructuredDoc parse_doc_answer(std::string_view text, TaskKind task) {
  for (Json j : json_object_candidates(text)) {
    if (!j.contains("task")) j["task"] = std::string(to_string(task));
    try {
      StructuredDoc d = doc_from_json(j);
      if (d.task == task) return d;
    } catch (const DataError&) {
    }
  }
  throw MalformedOutput("answer holds no " + std::string(to_string(task)) + " document", std::string(text));
}

RemoteGenerator::RemoteGenerator(TaskKind task, RemoteEndpointConfig cfg, const std::filesystem::path& prompt_dir,
                                 const std::atomic<bool>* cancel)
    : task_(task),
      client_(std::move(cfg), cancel),
      initial_prompt_(load_prompt(prompt_dir, "generate_initial")),
      revise_prompt_(load_prompt(prompt_dir, "generate_revise")) {}

StructuredDoc RemoteGenerator::ask(const std::string& prompt, const RasterImage& gt_image) {
  const RasterImage images[] = {gt_image};
  const int attempts = client_.config().parse_retries + 1;
  for (int k = 0;; ++k) {
    try {
      return parse_doc_answer(client_.complete(prompt, images), task_);
    } catch (const MalformedOutput&) {
      if (k + 1 >= attempts) throw;
    }
  }
}

StructuredDoc RemoteGenerator::initial(const RasterImage& gt_image) {
  return ask(fill_template(initial_prompt_, {{"TASK", std::string(to_string(task_))}, {"DOC_SCHEMA", doc_schema(task_)}}),
             gt_image);
}

StructuredDoc RemoteGenerator::revise(const RasterImage& gt_image, const StructuredDoc& prev,
                                      const DiscrepancyReport& feedback) {
  return ask(fill_template(revise_prompt_, {{"TASK", std::string(to_string(task_))},
                                            {"PREV_DOC", canonical_serialize(prev)},
                                            {"FEEDBACK", canonical_dump(to_json(feedback))},
                                            {"DOC_SCHEMA", doc_schema(task_)}}),
             gt_image);
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Threshold: return "threshold";
    case StopReason::FixedPoint: return "fixed_point";
    case StopReason::Budget: return "budget";
  }
  return "budget";
}

namespace {

[[noreturn]] void fail_with_trace(ReflectionTrace& trace, const char* stage) {
  std::exception_ptr cause = std::current_exception();
  ErrorKind kind = ErrorKind::Data;
  std::string what = "unknown failure";
  try {
    throw;
  } catch (const Error& e) {
    kind = e.kind();
    what = e.what();
  } catch (const std::exception& e) {
    what = e.what();
  }
  const std::size_t n = trace.steps.size();
  throw ReflectionError(kind, std::string(stage) + " failed after " + std::to_string(n) + " step(s): " + what,
                        std::move(trace), cause);
}

std::size_t best_of(const std::vector<ReflectionStep>& steps) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (steps[i].breakdown.total > steps[best].breakdown.total) best = i;
  return best;
}

}  // namespace

ReflectionTrace run_reflection(const PairContext& gt, Generator& gen, Judge& judge, const ReflectionOptions& options) {
  if (options.rounds < 1) throw ConfigError("rounds must be at least 1");
  if (!(options.stop_threshold >= 0.0 && options.stop_threshold <= 2.0))
    throw ConfigError("stop threshold must lie in [0, 2]");
  if (!options.severity.valid()) throw ConfigError("invalid severity map");
  if (!(options.epsilon > 0.0)) throw ConfigError("epsilon must be positive");

  ReflectionTrace trace;
  std::optional<Normalizer> norm = options.normalizer;
  StructuredDoc doc;
  try {
    doc = gen.initial(gt.gt_image);
  } catch (...) {
    fail_with_trace(trace, "initial generation");
  }

  for (int t = 0;; ++t) {
    ReflectionStep step;
    step.round = t;
    step.doc = doc;
    RenderResult r = render(doc);
    step.render_ok = r.success();
    std::optional<JudgeVerdict> verdict;
    if (step.render_ok) {
      step.image = r.image();
      try {
        if (doc.task != gt.task) throw DataError("generator produced a " + std::string(to_string(doc.task)) + " doc");
        verdict = judge.judge(JudgeInput{gt.task, gt.gt_image, r.image(), gt.gt_doc, doc});
      } catch (...) {
        fail_with_trace(trace, "judging");
      }
      step.report = verdict->report;
      if (!norm) {
        const double s = severity_sum(step.report, options.severity);
        norm = fit_normalizer(std::span(&s, 1), options.epsilon, "run");
      }
    } else {
      step.render_diagnostic = r.diagnostic();
      step.report = DiscrepancyReport::from_errors(gt.task, {});
    }
    step.breakdown = combined_reward(step.render_ok, verdict, norm.value_or(Normalizer{"run", 0.0, options.epsilon}),
                                     options.severity);
    trace.steps.push_back(std::move(step));
    ReflectionStep& last = trace.steps.back();

    if (last.breakdown.total >= options.stop_threshold) {
      last.stop_reason = StopReason::Threshold;
      break;
    }
    if (t == options.rounds) {
      last.stop_reason = StopReason::Budget;
      break;
    }
    StructuredDoc next;
    try {
      next = gen.revise(gt.gt_image, last.doc, last.report);
    } catch (...) {
      fail_with_trace(trace, "revision");
    }
    if (next == last.doc) {
      last.stop_reason = StopReason::FixedPoint;
      break;
    }
    doc = std::move(next);
  }
  trace.normalizer = norm.value_or(Normalizer{"run", 0.0, options.epsilon});
  trace.best_step = best_of(trace.steps);
  return trace;
}

Json to_json(const ReflectionStep& step) {
  Json j{{"round", step.round},
         {"doc", to_json(step.doc)},
         {"render_ok", step.render_ok},
         {"report", to_json(step.report)},
         {"breakdown", to_json(step.breakdown)}};
  if (!step.render_ok) j["render_diagnostic"] = step.render_diagnostic;
  if (step.stop_reason) j["stop_reason"] = std::string(to_string(*step.stop_reason));
  return j;
}

std::vector<std::string> write_trace(const ReflectionTrace& trace, const std::filesystem::path& dir,
                                     std::string_view prefix) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const ReflectionStep& s = trace.steps[i];
    Json j = to_json(s);
    if (s.image) {
      const std::string name = std::string(prefix) + "_round" + std::to_string(s.round) + ".png";
      write_png(dir / name, *s.image);
      j["png"] = name;
    }
    j["best"] = i == trace.best_step;
    lines.push_back(canonical_dump(j));
  }
  return lines;
}

}  // namespace verm
