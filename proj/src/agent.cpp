#include "ikbqa/agent.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "ikbqa/action.hpp"
#include "ikbqa/sparql_client.hpp"
#include "ikbqa/text.hpp"
#include "json.hpp"

namespace ikbqa {

AgentReply split_reply(std::string_view raw) {
  AgentReply r;
  r.rawText = std::string(raw);
  const auto act = raw.rfind("Action:");
  if (act == std::string_view::npos) {
    r.actionText = trim(raw);
    return r;
  }
  std::string_view action = raw.substr(act + 7);
  if (auto obs = action.find("\nObservation"); obs != std::string_view::npos) action = action.substr(0, obs);
  r.actionText = trim(action);
  const std::string_view before = raw.substr(0, act);
  if (auto th = before.rfind("Thought:"); th != std::string_view::npos) r.thought = trim(before.substr(th + 8));
  return r;
}

std::int64_t estimate_tokens(std::string_view text) {
  return static_cast<std::int64_t>((utf8_length(text) + 3) / 4);
}

ScriptedAgent::ScriptedAgent(std::vector<std::pair<std::string, std::string>> steps) : steps_(std::move(steps)) {}

AgentReply ScriptedAgent::reply(const std::vector<ChatMessage>&) {
  AgentReply r;
  if (next_ < steps_.size()) {
    r.thought = steps_[next_].first;
    r.actionText = steps_[next_].second;
    ++next_;
  } else {
    r.actionText = "Done";
  }
  r.rawText = "Thought: " + r.thought + "\nAction: " + r.actionText;
  return r;
}

std::vector<std::pair<std::string, std::string>> load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open script " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::vector<std::pair<std::string, std::string>> steps;
  try {
    const auto doc = nlohmann::json::parse(buf.str());
    for (const auto& s : doc) steps.emplace_back(s.value("thought", std::string()), s.at("action").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed script " + path + ": " + e.what());
  }
  return steps;
}

LlmAgent::LlmAgent(LlmEndpoint endpoint, SamplingConfig sampling)
    : endpoint_(std::move(endpoint)), sampling_(std::move(sampling)) {
  if (sampling_.n < 1) throw std::invalid_argument("sampling n must be positive");
  if (sampling_.maxTokens < 1) throw std::invalid_argument("max_tokens must be positive");
}

std::string LlmAgent::post(const std::string& body) const {
  const auto url = split_url(endpoint_.baseUrl);
  httplib::Headers headers;
  if (const char* key = std::getenv(endpoint_.apiKeyEnv.c_str()))
    headers.emplace("Authorization", std::string("Bearer ") + key);
  const std::string prefix = url.path == "/" ? "" : url.path;
  const auto timeout = endpoint_.timeout;
  auto wait = endpoint_.backoff;
  std::string lastError;
  for (int attempt = 0; attempt <= endpoint_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(wait);
      wait *= 2;
    }
    httplib::Client client(url.schemeHostPort);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(prefix + endpoint_.path, headers, body, "application/json");
    if (!res) {
      lastError = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    lastError = "chat endpoint returned HTTP " + std::to_string(res->status);
    if (res->status != 429 && res->status < 500) break;
  }
  throw AgentError(lastError + " (after " + std::to_string(endpoint_.retries) + " retries)");
}

AgentReply LlmAgent::reply(const std::vector<ChatMessage>& prompt) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : prompt) messages.push_back({{"role", m.role}, {"content", m.content}});
  const nlohmann::json request = {{"model", endpoint_.model},     {"messages", messages},
                                  {"temperature", sampling_.temperature}, {"top_p", sampling_.topP},
                                  {"n", sampling_.n},             {"stop", sampling_.stop},
                                  {"max_tokens", sampling_.maxTokens}};
  const std::string body = post(request.dump());

  std::vector<std::string> candidates;
  TokenUsage usage;
  bool haveUsage = false;
  try {
    const auto doc = nlohmann::json::parse(body);
    for (const auto& choice : doc.at("choices")) {
      const auto& content = choice.at("message").at("content");
      candidates.push_back(content.is_null() ? std::string() : content.get<std::string>());
    }
    if (doc.contains("usage") && doc["usage"].is_object()) {
      usage.prompt = doc["usage"].value("prompt_tokens", 0);
      usage.completion = doc["usage"].value("completion_tokens", 0);
      haveUsage = true;
    }
  } catch (const nlohmann::json::exception& e) {
    throw AgentError(std::string("malformed chat response: ") + e.what());
  }
  if (candidates.empty()) throw AgentError("chat response has no choices");
  if (!haveUsage) {
    for (const auto& m : prompt) usage.prompt += estimate_tokens(m.content);
    for (const auto& c : candidates) usage.completion += estimate_tokens(c);
  }

  for (const auto& c : candidates) {
    AgentReply r = split_reply(c);
    if (parse_action(r.actionText).ok()) {
      r.usage = usage;
      return r;
    }
  }
  AgentReply r = split_reply(candidates.front());
  r.usage = usage;
  r.parseFailed = true;
  return r;
}

}  // namespace ikbqa
