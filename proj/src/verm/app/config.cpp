#include "verm/app/config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "verm/core/errors.hpp"
#include "verm/render/codec.hpp"

namespace verm {

std::vector<NoiseConfig> default_noise_levels() {
  return {NoiseConfig{"noisy", 0.6, {}, NoisePolicy::Independent, 2},
          NoiseConfig{"mild", 0.3, {}, NoisePolicy::Independent, 2},
          NoiseConfig{"clean", 0.0, {}, NoisePolicy::Independent, 2}};
}

namespace {

using Reader = std::function<void(const Json&)>;

void read_object(const Json& j, const std::string& where, const std::map<std::string, Reader>& fields) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    auto it = fields.find(k);
    if (it == fields.end()) throw ConfigError(where + ": unknown key '" + k + "'");
    try {
      it->second(v);
    } catch (const Json::exception& e) {
      throw ConfigError(where + "." + k + ": " + e.what());
    } catch (const DataError& e) {
      throw ConfigError(where + "." + k + ": " + e.what());
    }
  }
}

template <typename T>
T as(const Json& v) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError("expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError("expected an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError("expected a number");
  } else {
    if (!v.is_string()) throw ConfigError("expected a string");
  }
  return v.get<T>();
}

Json sidecar_json(const SidecarConfig& s) {
  return Json{{"command", s.command}, {"pool_size", s.pool_size}, {"timeout_ms", s.timeout_ms},
              {"grace_ms", s.grace_ms}, {"max_retries", s.max_retries}};
}

SidecarConfig sidecar_from_json(const Json& j) {
  SidecarConfig s;
  read_object(j, "sidecar", {
      {"command", [&](const Json& v) {
         if (!v.is_array()) throw ConfigError("expected an array of strings");
         for (const auto& a : v) s.command.push_back(as<std::string>(a));
       }},
      {"pool_size", [&](const Json& v) { s.pool_size = as<int>(v); }},
      {"timeout_ms", [&](const Json& v) { s.timeout_ms = as<int>(v); }},
      {"grace_ms", [&](const Json& v) { s.grace_ms = as<int>(v); }},
      {"max_retries", [&](const Json& v) { s.max_retries = as<int>(v); }},
  });
  return s;
}

Json gen_json(const GenSettings& g) {
  return Json{{"min_ops", g.min_ops}, {"max_ops", g.max_ops},
              {"route", g.route == GenRoute::Edit ? "edit" : "infer"}, {"noise", to_json(g.noise)}};
}

GenSettings gen_from_json(const Json& j) {
  GenSettings g;
  read_object(j, "gen", {
      {"min_ops", [&](const Json& v) { g.min_ops = as<int>(v); }},
      {"max_ops", [&](const Json& v) { g.max_ops = as<int>(v); }},
      {"route", [&](const Json& v) {
         const auto r = as<std::string>(v);
         if (r == "edit") g.route = GenRoute::Edit;
         else if (r == "infer") g.route = GenRoute::Infer;
         else throw ConfigError("route must be \"edit\" or \"infer\"");
       }},
      {"noise", [&](const Json& v) { g.noise = noise_from_json(v); }},
  });
  return g;
}

}  // namespace

Json to_json(const HarnessConfig& c) {
  Json levels = Json::array();
  for (const auto& n : c.noise_levels) levels.push_back(to_json(n));
  Json j{{"severity_map", to_json(c.severity)},
         {"epsilon", c.epsilon},
         {"rounds", c.rounds},
         {"stop_threshold", c.stop_threshold},
         {"seed", c.seed},
         {"max_parallel", c.max_parallel},
         {"group_size", c.group_size},
         {"render_fail_rate", c.render_fail_rate},
         {"noise_levels", levels},
         {"gen", gen_json(c.gen)}};
  if (c.norm_scope) j["norm_scope"] = std::string(to_string(*c.norm_scope));
  if (c.judge_endpoint) j["judge_endpoint"] = to_json(*c.judge_endpoint);
  if (c.matcher_endpoint) j["matcher_endpoint"] = to_json(*c.matcher_endpoint);
  if (c.generator_endpoint) j["generator_endpoint"] = to_json(*c.generator_endpoint);
  if (c.sidecar) j["sidecar"] = sidecar_json(*c.sidecar);
  if (c.prompt_dir) j["prompt_dir"] = *c.prompt_dir;
  return j;
}

HarnessConfig config_from_json(const Json& j) {
  HarnessConfig c;
  read_object(j, "config", {
      {"severity_map", [&](const Json& v) { c.severity = severity_map_from_json(v); }},
      {"epsilon", [&](const Json& v) { c.epsilon = as<double>(v); }},
      {"norm_scope", [&](const Json& v) { c.norm_scope = norm_scope_from_string(as<std::string>(v)); }},
      {"rounds", [&](const Json& v) { c.rounds = as<int>(v); }},
      {"stop_threshold", [&](const Json& v) { c.stop_threshold = as<double>(v); }},
      {"seed", [&](const Json& v) {
         if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer");
         c.seed = v.get<std::uint64_t>();
       }},
      {"max_parallel", [&](const Json& v) {
         if (!v.is_number_unsigned()) throw ConfigError("expected a positive integer");
         c.max_parallel = v.get<std::size_t>();
       }},
      {"group_size", [&](const Json& v) { c.group_size = as<int>(v); }},
      {"render_fail_rate", [&](const Json& v) { c.render_fail_rate = as<double>(v); }},
      {"noise_levels", [&](const Json& v) {
         if (!v.is_array()) throw ConfigError("expected an array");
         c.noise_levels.clear();
         for (const auto& n : v) c.noise_levels.push_back(noise_from_json(n));
       }},
      {"gen", [&](const Json& v) { c.gen = gen_from_json(v); }},
      {"judge_endpoint", [&](const Json& v) { c.judge_endpoint = endpoint_from_json(v); }},
      {"matcher_endpoint", [&](const Json& v) { c.matcher_endpoint = endpoint_from_json(v); }},
      {"generator_endpoint", [&](const Json& v) { c.generator_endpoint = endpoint_from_json(v); }},
      {"sidecar", [&](const Json& v) { c.sidecar = sidecar_from_json(v); }},
      {"prompt_dir", [&](const Json& v) { c.prompt_dir = as<std::string>(v); }},
  });
  validate_config(c);
  return c;
}

HarnessConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void validate_config(const HarnessConfig& c) {
  if (!c.severity.valid()) throw ConfigError("severity_map must be non-negative and strictly increasing");
  if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) throw ConfigError("epsilon must be positive");
  if (c.rounds < 1) throw ConfigError("rounds must be at least 1");
  if (!(c.stop_threshold >= 0.0 && c.stop_threshold <= 2.0)) throw ConfigError("stop_threshold must lie in [0, 2]");
  if (c.max_parallel < 1) throw ConfigError("max_parallel must be at least 1");
  if (c.group_size < 1) throw ConfigError("group_size must be at least 1");
  if (!(c.render_fail_rate >= 0.0 && c.render_fail_rate <= 1.0))
    throw ConfigError("render_fail_rate must lie in [0, 1]");
  for (const auto& n : c.noise_levels) n.validate();
  c.gen.noise.validate();
  if (c.gen.min_ops < 1 || c.gen.max_ops < c.gen.min_ops) throw ConfigError("gen: need 1 <= min_ops <= max_ops");
  if (c.sidecar) {
    if (c.sidecar->command.empty()) throw ConfigError("sidecar.command must not be empty");
    if (c.sidecar->pool_size < 1) throw ConfigError("sidecar.pool_size must be at least 1");
    if (c.sidecar->timeout_ms < 1 || c.sidecar->grace_ms < 0 || c.sidecar->max_retries < 0)
      throw ConfigError("sidecar: timeouts and retries must be non-negative");
  }
}

}  // namespace verm
