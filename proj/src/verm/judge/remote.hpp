#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "verm/judge/judge.hpp"

namespace verm {

/// Chat-completions style endpoint shared by the remote judge, matcher and
/// generator. The credential is read from the environment variable named
/// by api_key_env.
struct RemoteEndpointConfig {
  std::string url;  // e.g. https://host/v1/chat/completions
  std::string model;
  std::string api_key_env = "VERM_JUDGE_API_KEY";
  int timeout_ms = 60000;
  int max_retries = 3;    // extra attempts after a transport failure
  int parse_retries = 1;  // extra requests after an unusable answer
  int max_parallel = 4;
  int backoff_ms = 250;   // doubled after every failed attempt
  double temperature = 0.0;
  bool operator==(const RemoteEndpointConfig&) const = default;
};

Json to_json(const RemoteEndpointConfig& cfg);
/// Rejects unknown keys and out-of-range values with ConfigError.
RemoteEndpointConfig endpoint_from_json(const Json& j);

class ChatClient {
 public:
  /// Throws ConfigError when the URL is unusable or the credential is unset.
  explicit ChatClient(RemoteEndpointConfig cfg, const std::atomic<bool>* cancel = nullptr);

  /// One user turn with a text part followed by PNG image parts; returns
  /// the assistant's text. Retries connection failures, 429 and 5xx with
  /// exponential backoff, then throws TransportError. Throws AbortedError
  /// once cancellation is requested, before starting a new attempt.
  std::string complete(const std::string& prompt, std::span<const RasterImage> images) const;

  const RemoteEndpointConfig& config() const { return cfg_; }

 private:
  RemoteEndpointConfig cfg_;
  std::string origin_;
  std::string path_;
  std::string api_key_;
  const std::atomic<bool>* cancel_;
};

/// Every balanced top-level {...} span in `text` that parses as a JSON
/// object, in order of appearance.
std::vector<Json> json_object_candidates(std::string_view text);

/// Applies the extraction rule to a judge answer: the first candidate
/// object must be a valid report for `task` (a missing "task" is filled
/// in), and no later candidate may validate to a different report. Throws
/// MalformedOutput with the raw text otherwise.
DiscrepancyReport parse_report_answer(std::string_view text, TaskKind task);

std::filesystem::path default_prompt_dir();
/// Reads <dir>/<name>.txt. Throws ConfigError when missing.
std::string load_prompt(const std::filesystem::path& dir, std::string_view name);
/// Replaces {{KEY}} placeholders. Throws ConfigError if any remain.
std::string fill_template(std::string text, const std::map<std::string, std::string>& values);
std::string taxonomy_listing(TaskKind task);

class RemoteJudge final : public Judge {
 public:
  RemoteJudge(RemoteEndpointConfig cfg, std::filesystem::path prompt_dir, const std::atomic<bool>* cancel = nullptr);
  JudgeVerdict judge(const JudgeInput& input) override;
  std::string name() const override { return "remote"; }

 private:
  ChatClient client_;
  std::map<TaskKind, std::string> prompts_;
};

}  // namespace verm
