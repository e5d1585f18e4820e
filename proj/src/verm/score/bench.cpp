#include "verm/score/bench.hpp"

#include <set>
#include <sstream>

#include "verm/core/parallel.hpp"
#include "verm/render/codec.hpp"
#include "verm/reward/reward.hpp"

namespace verm {

namespace {

const Json& need(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("manifest entry: missing '") + key + "'");
  return *it;
}

std::string need_string(const Json& j, const char* key) {
  const Json& v = need(j, key);
  if (!v.is_string()) throw DataError(std::string("manifest entry: '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

Json to_json(const ManifestEntry& e) {
  Json j{{"id", e.id},
         {"task", std::string(to_string(e.task))},
         {"gt_png", e.gt_png},
         {"pred_png", e.pred_png},
         {"gt_report", to_json(e.gt_report)}};
  if (e.gt_doc) j["gt_doc"] = *e.gt_doc;
  if (e.pred_doc) j["pred_doc"] = *e.pred_doc;
  return j;
}

ManifestEntry manifest_entry_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("manifest entry must be an object");
  static const std::set<std::string> known{"id", "task", "gt_png", "pred_png", "gt_report", "gt_doc", "pred_doc"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw DataError("manifest entry: unknown key '" + k + "'");
  ManifestEntry e;
  e.id = need_string(j, "id");
  e.task = task_from_string(need_string(j, "task"));
  e.gt_png = need_string(j, "gt_png");
  e.pred_png = need_string(j, "pred_png");
  e.gt_report = report_from_json(need(j, "gt_report"));
  if (e.gt_report.task != e.task) throw DataError("manifest entry " + e.id + ": gt_report task differs");
  if (j.contains("gt_doc")) e.gt_doc = need_string(j, "gt_doc");
  if (j.contains("pred_doc")) e.pred_doc = need_string(j, "pred_doc");
  return e;
}

Json to_json(const ManifestHeader& h) {
  Json stats = Json::object();
  for (const auto& [task, n] : h.stats) stats[std::string(to_string(task))] = n;
  Json body{{"stats", stats}, {"total", h.total}};
  if (h.profile) body["profile"] = *h.profile;
  return Json{{"manifest", body}};
}

ManifestHeader manifest_header_from_json(const Json& j) {
  const Json& body = need(j, "manifest");
  if (!body.is_object()) throw DataError("manifest header must be an object");
  ManifestHeader h;
  for (const auto& [k, v] : body.items())
    if (k != "stats" && k != "total" && k != "profile") throw DataError("manifest header: unknown key '" + k + "'");
  const Json& stats = need(body, "stats");
  if (!stats.is_object()) throw DataError("manifest header: stats must be an object");
  for (const auto& [k, v] : stats.items()) {
    if (!v.is_number_unsigned()) throw DataError("manifest header: count for '" + k + "' must be a non-negative integer");
    h.stats[task_from_string(k)] = v.get<std::size_t>();
  }
  const Json& total = need(body, "total");
  if (!total.is_number_unsigned()) throw DataError("manifest header: total must be a non-negative integer");
  h.total = total.get<std::size_t>();
  if (body.contains("profile")) {
    if (!body["profile"].is_string()) throw DataError("manifest header: profile must be a string");
    h.profile = body["profile"].get<std::string>();
  }
  return h;
}

BenchManifest parse_manifest(std::string_view text, std::filesystem::path base_dir) {
  BenchManifest m;
  m.base_dir = std::move(base_dir);
  std::istringstream in{std::string(text)};
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      if (j.is_object() && j.contains("manifest")) {
        if (m.header || !m.entries.empty()) throw DataError("header must be the first line");
        m.header = manifest_header_from_json(j);
      } else {
        m.entries.push_back(manifest_entry_from_json(j));
      }
    } catch (const Json::exception& e) {
      throw DataError("manifest line " + std::to_string(n) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("manifest line " + std::to_string(n) + ": " + e.what());
    }
  }
  return m;
}

BenchManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.parent_path());
}

std::string dump_manifest(const BenchManifest& m) {
  std::string out;
  if (m.header) out += canonical_dump(to_json(*m.header)) + "\n";
  for (const auto& e : m.entries) out += canonical_dump(to_json(e)) + "\n";
  return out;
}

std::optional<std::map<TaskKind, std::size_t>> stats_profile(std::string_view name) {
  if (name == "vc-rewardbench")
    return std::map<TaskKind, std::size_t>{{TaskKind::Chart, 595}, {TaskKind::Table, 298}, {TaskKind::Svg, 442}};
  return std::nullopt;
}

std::vector<std::string> manifest_violations(const BenchManifest& m) {
  std::vector<std::string> out;
  if (m.header) {
    const ManifestHeader& h = *m.header;
    std::size_t sum = 0;
    for (const auto& [task, n] : h.stats) sum += n;
    if (sum != h.total)
      out.push_back("stats: task counts add up to " + std::to_string(sum) + ", declared total is " + std::to_string(h.total));
    if (h.profile) {
      auto profile = stats_profile(*h.profile);
      if (!profile) {
        out.push_back("stats: unknown profile '" + *h.profile + "'");
      } else {
        for (TaskKind t : kAllTasks) {
          const std::size_t want = profile->count(t) ? profile->at(t) : 0;
          const std::size_t got = h.stats.count(t) ? h.stats.at(t) : 0;
          if (want != got)
            out.push_back("stats: profile " + *h.profile + " expects " + std::to_string(want) + " " +
                          std::string(to_string(t)) + " instances, header declares " + std::to_string(got));
        }
      }
    }
    if (!m.entries.empty()) {
      std::map<TaskKind, std::size_t> actual;
      for (const auto& e : m.entries) ++actual[e.task];
      for (TaskKind t : kAllTasks) {
        const std::size_t want = h.stats.count(t) ? h.stats.at(t) : 0;
        const std::size_t got = actual.count(t) ? actual.at(t) : 0;
        if (want != got)
          out.push_back("stats: header declares " + std::to_string(want) + " " + std::string(to_string(t)) +
                        " instances, manifest has " + std::to_string(got));
      }
    }
  }
  std::set<std::string> ids;
  for (const auto& e : m.entries) {
    if (!ids.insert(e.id).second) out.push_back("entry " + e.id + ": duplicate id");
    for (const auto& v : validate_report(e.gt_report).violations) out.push_back("entry " + e.id + ": " + v);
  }
  return out;
}

JudgeInput load_judge_input(const BenchManifest& m, const ManifestEntry& e) {
  JudgeInput in;
  in.task = e.task;
  in.gt_image = read_png(m.base_dir / e.gt_png);
  in.pred_image = read_png(m.base_dir / e.pred_png);
  if (e.gt_doc) in.gt_doc = parse_doc(read_text_file(m.base_dir / *e.gt_doc));
  if (e.pred_doc) in.pred_doc = parse_doc(read_text_file(m.base_dir / *e.pred_doc));
  return in;
}

Json to_json(const TaskMetrics& m) {
  return Json{{"precision_h", m.hard.precision}, {"recall_h", m.hard.recall}, {"f1_h", m.hard.f1},
              {"precision_s", m.soft.precision}, {"recall_s", m.soft.recall}, {"f1_s", m.soft.f1},
              {"s_c", m.s_c ? Json(*m.s_c) : Json(nullptr)},
              {"n", m.n},
              {"failures", m.failures}};
}

Json to_json(const BenchMetrics& m) {
  Json tasks = Json::object();
  for (const auto& [task, tm] : m.per_task) tasks[std::string(to_string(task))] = to_json(tm);
  return Json{{"averaging", "micro"}, {"tasks", tasks}, {"aggregate", to_json(m.aggregate)}};
}

namespace {

struct Pool {
  MatchCounts counts;
  std::vector<double> pred_sums, gt_sums;
  std::size_t n = 0, failures = 0;

  TaskMetrics finish() const {
    TaskMetrics t;
    t.counts = counts;
    t.hard = prf1(counts, Regime::Hard);
    t.soft = prf1(counts, Regime::Soft);
    if (!pred_sums.empty()) t.s_c = pearson(pred_sums, gt_sums);
    t.n = n;
    t.failures = failures;
    return t;
  }
};

}  // namespace

BenchMetrics score_benchmark(const BenchManifest& manifest, Judge& judge, Matcher& matcher, const SeverityMap& map,
                             const ScoreOptions& options) {
  BenchMetrics out;
  const auto& entries = manifest.entries;
  out.instances.resize(entries.size());
  parallel_for(entries.size(), options.max_parallel, [&](std::size_t i) {
    const ManifestEntry& e = entries[i];
    InstanceScore& s = out.instances[i];
    s.id = e.id;
    s.task = e.task;
    s.gt_sum = severity_sum(e.gt_report, map);
    try {
      const JudgeVerdict v = judge.judge(load_judge_input(manifest, e));
      s.pred_report = v.report;
      s.match = match_errors(v.report, e.gt_report, matcher);
      s.pred_sum = severity_sum(v.report, map);
    } catch (const AbortedError&) {
      throw;
    } catch (const Error& err) {
      s.error_kind = err.kind();
      s.error = err.what();
    } catch (const std::exception& err) {
      s.error_kind = ErrorKind::Data;
      s.error = err.what();
    }
  });

  std::map<TaskKind, Pool> pools;
  Pool all;
  for (const auto& s : out.instances) {
    for (Pool* p : {&pools[s.task], &all}) {
      ++p->n;
      if (s.error_kind) {
        ++p->failures;
        continue;
      }
      p->counts += count_matches(*s.match);
      p->pred_sums.push_back(s.pred_sum);
      p->gt_sums.push_back(s.gt_sum);
    }
  }
  if (all.n > 0 && static_cast<double>(all.failures) > options.max_failure_share * static_cast<double>(all.n))
    throw AbortedError(std::to_string(all.failures) + " of " + std::to_string(all.n) +
                       " instances failed, above the failure budget");
  for (const auto& [task, pool] : pools) out.per_task[task] = pool.finish();
  out.aggregate = all.finish();
  return out;
}

}  // namespace verm
