#include "verm/judge/remote.hpp"

#include <chrono>
#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "verm/render/codec.hpp"

#ifndef VERM_RESOURCE_DIR
#define VERM_RESOURCE_DIR "resources"
#endif

namespace verm {

Json to_json(const RemoteEndpointConfig& c) {
  return Json{{"url", c.url},
              {"model", c.model},
              {"api_key_env", c.api_key_env},
              {"timeout_ms", c.timeout_ms},
              {"max_retries", c.max_retries},
              {"parse_retries", c.parse_retries},
              {"max_parallel", c.max_parallel},
              {"backoff_ms", c.backoff_ms},
              {"temperature", c.temperature}};
}

RemoteEndpointConfig endpoint_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("remote endpoint: expected an object");
  RemoteEndpointConfig c;
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "url") c.url = v.get<std::string>();
      else if (k == "model") c.model = v.get<std::string>();
      else if (k == "api_key_env") c.api_key_env = v.get<std::string>();
      else if (k == "timeout_ms") c.timeout_ms = v.get<int>();
      else if (k == "max_retries") c.max_retries = v.get<int>();
      else if (k == "parse_retries") c.parse_retries = v.get<int>();
      else if (k == "max_parallel") c.max_parallel = v.get<int>();
      else if (k == "backoff_ms") c.backoff_ms = v.get<int>();
      else if (k == "temperature") c.temperature = v.get<double>();
      else throw ConfigError("remote endpoint: unknown key '" + k + "'");
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("remote endpoint: ") + e.what());
  }
  if (c.timeout_ms <= 0) throw ConfigError("remote endpoint: timeout_ms must be positive");
  if (c.max_retries < 0 || c.parse_retries < 0) throw ConfigError("remote endpoint: retry counts must be >= 0");
  if (c.max_parallel < 1) throw ConfigError("remote endpoint: max_parallel must be >= 1");
  if (c.backoff_ms < 0) throw ConfigError("remote endpoint: backoff_ms must be >= 0");
  return c;
}

ChatClient::ChatClient(RemoteEndpointConfig cfg, const std::atomic<bool>* cancel)
    : cfg_(std::move(cfg)), cancel_(cancel) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(cfg_.url, m, kUrl)) throw ConfigError("remote endpoint: invalid url '" + cfg_.url + "'");
  origin_ = m[1];
  path_ = m[2].matched ? std::string(m[2]) : "/";
  const char* key = std::getenv(cfg_.api_key_env.c_str());
  if (!key || !*key) throw ConfigError("remote endpoint: " + cfg_.api_key_env + " is not set");
  api_key_ = key;
}

namespace {

std::string answer_text(const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded()) throw MalformedOutput("endpoint returned a non-JSON body", body);
  try {
    const Json& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    std::string text;
    for (const auto& part : content)
      if (part.value("type", "") == "text") text += part.at("text").get<std::string>();
    return text;
  } catch (const Json::exception&) {
    throw MalformedOutput("endpoint response has no choices[0].message.content", body);
  }
}

}  // namespace

std::string ChatClient::complete(const std::string& prompt, std::span<const RasterImage> images) const {
  Json content = Json::array();
  content.push_back({{"type", "text"}, {"text", prompt}});
  for (const auto& img : images)
    content.push_back({{"type", "image_url"},
                       {"image_url", {{"url", "data:image/png;base64," + base64_encode(encode_png(img))}}}});
  const Json body{{"model", cfg_.model},
                  {"temperature", cfg_.temperature},
                  {"messages", Json::array({{{"role", "user"}, {"content", content}}})}};
  const std::string payload = body.dump();
  const httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};

  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (cancel_ && cancel_->load()) throw AbortedError("cancelled before request");
    if (attempt > 0) {
      const long long wait = static_cast<long long>(cfg_.backoff_ms) << std::min(attempt - 1, 16);
      std::this_thread::sleep_for(std::chrono::milliseconds(wait));
      if (cancel_ && cancel_->load()) throw AbortedError("cancelled before request");
    }
    httplib::Client cli(origin_);
    const auto timeout = std::chrono::milliseconds(cfg_.timeout_ms);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    auto res = cli.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return answer_text(res->body);
    if (res->status == 401 || res->status == 403)
      throw ConfigError("endpoint rejected the credential (HTTP " + std::to_string(res->status) + ")");
    last_error = "HTTP " + std::to_string(res->status);
    if (res->status != 429 && res->status < 500) break;
  }
  throw TransportError("endpoint " + cfg_.url + " failed after " + std::to_string(cfg_.max_retries + 1) +
                       " attempts: " + last_error);
}

std::vector<Json> json_object_candidates(std::string_view text) {
  std::vector<Json> out;
  std::size_t i = 0;
  while ((i = text.find('{', i)) != std::string_view::npos) {
    int depth = 0;
    bool in_string = false, escaped = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t k = i; k < text.size(); ++k) {
      const char c = text[k];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
      } else if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        end = k;
        break;
      }
    }
    if (end == std::string_view::npos) break;
    Json j = Json::parse(text.substr(i, end - i + 1), nullptr, false);
    if (!j.is_discarded() && j.is_object()) {
      out.push_back(std::move(j));
      i = end + 1;
    } else {
      ++i;
    }
  }
  return out;
}

namespace {

/// Nullopt with `why` set when the object is not a valid report for task.
std::optional<DiscrepancyReport> as_report(Json j, TaskKind task, std::string& why) {
  if (!j.contains("task")) j["task"] = std::string(to_string(task));
  DiscrepancyReport r;
  try {
    r = report_from_json(j);
  } catch (const Error& e) {
    why = e.what();
    return std::nullopt;
  }
  if (r.task != task) {
    why = "report is for task " + std::string(to_string(r.task)) + ", expected " + std::string(to_string(task));
    return std::nullopt;
  }
  const auto v = validate_report(r);
  if (!v.ok()) {
    why = v.violations.front();
    return std::nullopt;
  }
  return r;
}

}  // namespace

DiscrepancyReport parse_report_answer(std::string_view text, TaskKind task) {
  const auto candidates = json_object_candidates(text);
  if (candidates.empty()) throw MalformedOutput("no JSON object in the answer", std::string(text));
  std::string why;
  auto first = as_report(candidates.front(), task, why);
  if (!first) throw MalformedOutput("invalid report: " + why, std::string(text));
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    std::string ignored;
    auto other = as_report(candidates[k], task, ignored);
    if (other && *other != *first)
      throw MalformedOutput("answer contains conflicting report objects", std::string(text));
  }
  return *first;
}

std::filesystem::path default_prompt_dir() {
  if (const char* env = std::getenv("VERM_PROMPT_DIR"); env && *env) return env;
  return std::filesystem::path(VERM_RESOURCE_DIR) / "prompts";
}

std::string load_prompt(const std::filesystem::path& dir, std::string_view name) {
  const auto path = dir / (std::string(name) + ".txt");
  try {
    return read_text_file(path);
  } catch (const Error&) {
    throw ConfigError("prompt template not found: " + path.string());
  }
}

std::string fill_template(std::string text, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    const std::string tag = "{{" + key + "}}";
    for (std::size_t pos = 0; (pos = text.find(tag, pos)) != std::string::npos; pos += value.size())
      text.replace(pos, tag.size(), value);
  }
  if (auto pos = text.find("{{"); pos != std::string::npos)
    throw ConfigError("prompt template has an unfilled placeholder near '" + text.substr(pos, 24) + "'");
  return text;
}

std::string taxonomy_listing(TaskKind task) {
  std::string out;
  for (auto c : taxonomy(task)) out += "- " + std::string(c) + "\n";
  return out;
}

RemoteJudge::RemoteJudge(RemoteEndpointConfig cfg, std::filesystem::path prompt_dir, const std::atomic<bool>* cancel)
    : client_(std::move(cfg), cancel) {
  for (TaskKind t : kAllTasks)
    prompts_[t] = fill_template(load_prompt(prompt_dir, "judge_" + std::string(to_string(t))),
                                {{"TASK", std::string(to_string(t))}, {"TAXONOMY", taxonomy_listing(t)}});
}

JudgeVerdict RemoteJudge::judge(const JudgeInput& input) {
  const RasterImage images[] = {input.gt_image, input.pred_image};
  const int attempts = client_.config().parse_retries + 1;
  for (int k = 0;; ++k) {
    try {
      const std::string text = client_.complete(prompts_.at(input.task), images);
      return {parse_report_answer(text, input.task), text};
    } catch (const MalformedOutput&) {
      if (k + 1 >= attempts) throw;
    }
  }
}

}  // namespace verm
