#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "verm/verm.h"

namespace {

using Json = nlohmann::json;

std::atomic<verm_harness*> g_harness{nullptr};

extern "C" void on_interrupt(int) {
  if (verm_harness* h = g_harness.load()) verm_harness_cancel(h);
}

int exit_code(verm_status s) {
  switch (s) {
    case VERM_OK: return 0;
    case VERM_ERR_CONFIG:
    case VERM_ERR_TRANSPORT:
    case VERM_ERR_ARGUMENT: return 2;
    default: return 1;
  }
}

int report(verm_status s) {
  if (s != VERM_OK) std::cerr << "verm: " << verm_status_name(s) << ": " << verm_last_error() << "\n";
  return exit_code(s);
}

/// Owns one verm_text result.
struct Text {
  verm_text* t = nullptr;
  ~Text() { verm_text_free(t); }
  std::string_view view() const { return {verm_text_data(t), verm_text_size(t)}; }
};

int write_output(const std::string& out, std::string_view body) {
  if (out.empty() || out == "-") {
    std::cout << body;
    if (!body.empty() && body.back() != '\n') std::cout << "\n";
    std::cout.flush();
    return 0;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  f << body;
  if (!body.empty() && body.back() != '\n') f << "\n";
  if (!f) {
    std::cerr << "verm: cannot write " << out << "\n";
    return 1;
  }
  return 0;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_parallel;
  std::optional<double> epsilon;
  std::optional<std::string> norm_scope;
  std::optional<std::string> sidecar_cmd;
  std::optional<int> rounds;
  std::optional<double> stop_threshold;
  std::optional<int> group_size;
  std::optional<double> render_fail_rate;
};

/// Loads the config file (if any) and applies flag overrides.
verm_status open_harness(const Globals& g, verm_harness** h) {
  verm_status s = g.config.empty() ? verm_harness_create(nullptr, h) : verm_harness_load(g.config.c_str(), h);
  if (s != VERM_OK) return s;
  Json patch = Json::object();
  if (g.seed) patch["seed"] = *g.seed;
  if (g.max_parallel) patch["max_parallel"] = *g.max_parallel;
  if (g.epsilon) patch["epsilon"] = *g.epsilon;
  if (g.norm_scope) patch["norm_scope"] = *g.norm_scope;
  if (g.rounds) patch["rounds"] = *g.rounds;
  if (g.stop_threshold) patch["stop_threshold"] = *g.stop_threshold;
  if (g.group_size) patch["group_size"] = *g.group_size;
  if (g.render_fail_rate) patch["render_fail_rate"] = *g.render_fail_rate;
  if (g.sidecar_cmd) {
    Text current;
    if ((s = verm_harness_config(*h, &current.t)) != VERM_OK) return s;
    Json sidecar = Json::parse(current.view()).value("sidecar", Json::object());
    sidecar["command"] = split_words(*g.sidecar_cmd);
    patch["sidecar"] = sidecar;
  }
  if (patch.empty()) return VERM_OK;
  return verm_harness_update(*h, patch.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verm: visual reward harness for vision-to-code"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--seed", g.seed, "seed for every random draw");
  app.add_option("--max-parallel", g.max_parallel, "bound on concurrent judge calls and renders")->check(CLI::PositiveNumber);
  app.add_option("--epsilon", g.epsilon, "normalizer epsilon");
  app.add_option("--norm-scope", g.norm_scope, "normalizer scope")->check(CLI::IsMember({"group", "batch"}));
  app.add_option("--sidecar-cmd", g.sidecar_cmd, "external renderer command line");

  std::string out, task = "chart", manifest, judge = "oracle", matcher = "exact", generator = "oracle-repair";
  std::string doc, plan;
  int n = 10;
  std::vector<std::string> paths;

  auto* gen = app.add_subcommand("gen", "generate a corrupted corpus");
  gen->add_option("--task", task)->required()->check(CLI::IsMember({"chart", "table", "svg"}));
  gen->add_option("--n", n, "number of instances")->check(CLI::NonNegativeNumber);
  gen->add_option("--out", out, "output directory")->required();
  gen->add_option("--doc", doc, "corrupt this doc instead of random ones");
  gen->add_option("--plan", plan, "apply this op plan (needs --doc)");

  auto* jud = app.add_subcommand("judge", "judge every manifest entry");
  jud->add_option("--manifest", manifest)->required();
  jud->add_option("--judge", judge)->check(CLI::IsMember({"oracle", "remote", "coarse"}));
  jud->add_option("--out", out, "output file (default stdout)");

  auto* rew = app.add_subcommand("reward", "reward breakdowns for a manifest");
  rew->add_option("--manifest", manifest)->required();
  rew->add_option("--judge", judge)->check(CLI::IsMember({"oracle", "remote"}));
  rew->add_option("--out", out, "output file (default stdout)");

  auto* sco = app.add_subcommand("score", "benchmark metrics for a manifest");
  sco->add_option("--manifest", manifest)->required();
  sco->add_option("--judge", judge)->check(CLI::IsMember({"oracle", "remote"}));
  sco->add_option("--matcher", matcher)->check(CLI::IsMember({"exact", "remote"}));
  sco->add_option("--out", out, "output file (default stdout)");

  auto* tts = app.add_subcommand("tts", "reflection runs over a manifest");
  tts->add_option("--manifest", manifest)->required();
  tts->add_option("--generator", generator)->check(CLI::IsMember({"oracle-repair", "identity", "remote"}));
  tts->add_option("--judge", judge)->check(CLI::IsMember({"oracle", "remote"}));
  tts->add_option("--rounds", g.rounds, "revision budget (default 3)")->check(CLI::PositiveNumber);
  tts->add_option("--stop-threshold", g.stop_threshold, "stop once the total reaches this (default 2.0)");
  tts->add_option("--out", out, "trace directory")->required();

  auto* rl = app.add_subcommand("rl-sim", "rewards and advantages across noise levels");
  auto* rl_manifest = rl->add_option("--manifest", manifest, "take gt docs from this manifest");
  rl->add_option("--task", task, "task of the random corpus")->check(CLI::IsMember({"chart", "table", "svg"}))
      ->excludes(rl_manifest);
  rl->add_option("--n", n, "random corpus size")->check(CLI::NonNegativeNumber)->excludes(rl_manifest);
  rl->add_option("--judge", judge)->check(CLI::IsMember({"oracle", "remote"}));
  rl->add_option("--group-size", g.group_size, "rollouts per prompt (default 8)")->check(CLI::PositiveNumber);
  rl->add_option("--render-fail-rate", g.render_fail_rate, "share of unrenderable rollouts");
  rl->add_option("--out", out, "output file (default stdout)");

  auto* val = app.add_subcommand("validate", "schema checks for harness files");
  val->add_option("paths", paths, "files or corpus directories")->required();
  val->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (val->parsed()) {
    std::string body;
    bool all_ok = true;
    for (const auto& p : paths) {
      Text t;
      int valid = 0;
      const verm_status s = verm_validate(p.c_str(), &valid, &t.t);
      if (s != VERM_OK) return report(s);
      all_ok = all_ok && valid;
      body += std::string(t.view()) + "\n";
    }
    if (write_output(out, body) != 0) return 1;
    return all_ok ? 0 : 1;
  }

  verm_harness* h = nullptr;
  verm_status s = open_harness(g, &h);
  if (s != VERM_OK) {
    verm_harness_destroy(h);
    return report(s);
  }
  g_harness = h;
  std::signal(SIGINT, on_interrupt);

  Text result;
  bool to_stdout = false;
  if (gen->parsed()) {
    s = verm_gen(h, task.c_str(), n, out.c_str(), doc.empty() ? nullptr : doc.c_str(),
                 plan.empty() ? nullptr : plan.c_str(), &result.t);
    to_stdout = true;
  } else if (jud->parsed()) {
    s = verm_judge_manifest(h, manifest.c_str(), judge.c_str(), &result.t);
  } else if (rew->parsed()) {
    s = verm_reward_manifest(h, manifest.c_str(), judge.c_str(), &result.t);
  } else if (sco->parsed()) {
    s = verm_score_manifest(h, manifest.c_str(), judge.c_str(), matcher.c_str(), &result.t);
  } else if (tts->parsed()) {
    s = verm_tts_manifest(h, manifest.c_str(), generator.c_str(), judge.c_str(), out.c_str(), &result.t);
    to_stdout = true;
  } else if (rl->parsed()) {
    s = verm_rl_sim(h, manifest.empty() ? nullptr : manifest.c_str(), task.c_str(), n, judge.c_str(), &result.t);
  }

  std::signal(SIGINT, SIG_DFL);
  g_harness = nullptr;
  verm_harness_destroy(h);
  if (s != VERM_OK) return report(s);
  return write_output(to_stdout ? std::string() : out, result.view());
}
