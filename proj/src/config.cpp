#include "ikbqa/config.hpp"

#include <fstream>
#include <sstream>

namespace ikbqa {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::chrono::milliseconds ms(const json& j, const char* key, std::chrono::milliseconds fallback) {
  return j.contains(key) ? std::chrono::milliseconds(j[key].get<std::int64_t>()) : fallback;
}

}  // namespace

EngineConfig config_from_json(const json& j, const std::filesystem::path& baseDir) {
  EngineConfig c;
  try {
    for (const auto& [name, d] : j.at("datasets").items()) {
      DatasetConfig dc;
      dc.dataset = parse_dataset(name);
      dc.kbPath = resolve(baseDir, d.at("kb").get<std::string>());
      dc.profile = parse_profile(d.value("profile", std::string("freebase")));
      dc.instructionPath = resolve(baseDir, d.at("instruction").get<std::string>());
      dc.exemplarDir = resolve(baseDir, d.value("exemplars", std::string()));
      dc.classifierPath = resolve(baseDir, d.value("classifier", std::string()));
      if (d.contains("shots")) {
        if (d["shots"].is_string()) {
          if (d["shots"] != "all") throw ConfigError("shots must be a number or \"all\"");
          dc.shots = kAllShots;
        } else {
          dc.shots = d["shots"].get<std::size_t>();
        }
      }
      dc.defaultType = d.value("defaultType", labels_for(dc.dataset).front());
      make_question_type(dc.dataset, dc.defaultType);
      c.datasets[std::string(dataset_name(dc.dataset))] = std::move(dc);
    }
    c.dialogue.maxTurns = j.value("maxTurns", 20);
    c.dialogue.mode = parse_review_mode(j.value("mode", std::string("auto")));
    if (j.contains("prices")) {
      c.dialogue.prices.inputPer1k = j["prices"].value("inputPer1k", 0.01);
      c.dialogue.prices.outputPer1k = j["prices"].value("outputPer1k", 0.03);
    }
    if (j.contains("sampling")) {
      const auto& s = j["sampling"];
      c.sampling.temperature = s.value("temperature", c.sampling.temperature);
      c.sampling.topP = s.value("topP", c.sampling.topP);
      c.sampling.n = s.value("n", c.sampling.n);
      c.sampling.stop = s.value("stop", c.sampling.stop);
      c.sampling.maxTokens = s.value("maxTokens", c.sampling.maxTokens);
    }
    if (j.contains("llm")) {
      const auto& l = j["llm"];
      c.llm.baseUrl = l.value("baseUrl", c.llm.baseUrl);
      c.llm.path = l.value("path", c.llm.path);
      c.llm.model = l.value("model", c.llm.model);
      c.llm.apiKeyEnv = l.value("apiKeyEnv", c.llm.apiKeyEnv);
      c.llm.timeout = ms(l, "timeoutMs", c.llm.timeout);
      c.llm.retries = l.value("retries", c.llm.retries);
      c.llm.backoff = ms(l, "backoffMs", c.llm.backoff);
    }
    if (j.contains("embedding") && j["embedding"].is_object()) {
      const auto& e = j["embedding"];
      EmbeddingClientConfig ec;
      ec.baseUrl = e.at("baseUrl").get<std::string>();
      ec.path = e.value("path", ec.path);
      ec.model = e.value("model", ec.model);
      ec.apiKeyEnv = e.value("apiKeyEnv", ec.apiKeyEnv);
      ec.timeout = ms(e, "timeoutMs", ec.timeout);
      c.embedding = ec;
    }
    if (j.contains("tools")) {
      const auto& t = j["tools"];
      c.tools.topK = t.value("topK", c.tools.topK);
      c.tools.observationCharCap = t.value("observationCharCap", c.tools.observationCharCap);
      c.tools.maxAnchors = t.value("maxAnchors", c.tools.maxAnchors);
      c.tools.resultCap = t.value("resultCap", c.tools.resultCap);
      c.tools.joinBudget = t.value("joinBudget", c.tools.joinBudget);
      c.tools.rankWithObjectText = t.value("rankWithObjectText", c.tools.rankWithObjectText);
    }
    c.corsOrigin = j.value("cors", c.corsOrigin);
    c.sessionDir = resolve(baseDir, j.value("sessionDir", std::string("sessions")));
    c.cacheDir = resolve(baseDir, j.value("cacheDir", std::string()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  if (c.dialogue.maxTurns < 2 || c.dialogue.maxTurns % 2) throw ConfigError("maxTurns must be a positive even number");
  return c;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::absolute(path).parent_path());
}

}  // namespace ikbqa
