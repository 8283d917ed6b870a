#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ikbqa {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct TokenUsage {
  std::int64_t prompt = 0;
  std::int64_t completion = 0;

  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct AgentReply {
  std::string rawText;
  std::string thought;
  std::string actionText;
  TokenUsage usage;
  /// Set when none of the sampled candidates held a parseable action.
  bool parseFailed = false;
};

/// Extracts the last Thought:/Action: pair from model output. Without an
/// Action: marker the whole text becomes the action and the thought is empty.
AgentReply split_reply(std::string_view raw);

/// ceil(code points / 4)
std::int64_t estimate_tokens(std::string_view text);

class AgentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Agent {
 public:
  virtual ~Agent() = default;
  /// May throw AgentError; the dialogue then ends as Failed.
  virtual AgentReply reply(const std::vector<ChatMessage>& prompt) = 0;
  virtual std::string identity() const = 0;
};

/// Replays fixed (thought, actionText) steps, then answers Done forever.
class ScriptedAgent final : public Agent {
 public:
  explicit ScriptedAgent(std::vector<std::pair<std::string, std::string>> steps);

  AgentReply reply(const std::vector<ChatMessage>& prompt) override;
  std::string identity() const override { return "scripted"; }
  std::size_t position() const { return next_; }

 private:
  std::vector<std::pair<std::string, std::string>> steps_;
  std::size_t next_ = 0;
};

/// Loads a script: JSON array of {"thought", "action"} objects.
std::vector<std::pair<std::string, std::string>> load_script(const std::string& path);

class FunctionAgent final : public Agent {
 public:
  using Fn = std::function<AgentReply(const std::vector<ChatMessage>&)>;
  explicit FunctionAgent(Fn fn, std::string name = "function") : fn_(std::move(fn)), name_(std::move(name)) {}

  AgentReply reply(const std::vector<ChatMessage>& prompt) override { return fn_(prompt); }
  std::string identity() const override { return name_; }

 private:
  Fn fn_;
  std::string name_;
};

struct SamplingConfig {
  double temperature = 0.7;
  double topP = 1.0;
  int n = 6;
  std::vector<std::string> stop = {"\nObservation", "\nThought"};
  int maxTokens = 384;

  static SamplingConfig annotation() {
    SamplingConfig s;
    s.n = 1;
    return s;
  }
};

struct LlmEndpoint {
  std::string baseUrl;  // e.g. https://api.openai.com
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4";
  std::string apiKeyEnv = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{60000};
  int retries = 3;
  std::chrono::milliseconds backoff{500};  // doubled after every failed attempt
};

/// OpenAI-compatible chat-completion agent. Of the n sampled candidates the
/// first whose action parses is used; if none parse, the first one is
/// returned with parseFailed set.
class LlmAgent final : public Agent {
 public:
  LlmAgent(LlmEndpoint endpoint, SamplingConfig sampling);

  AgentReply reply(const std::vector<ChatMessage>& prompt) override;
  std::string identity() const override { return "llm:" + endpoint_.model; }

  const SamplingConfig& sampling() const { return sampling_; }

 private:
  std::string post(const std::string& body) const;

  LlmEndpoint endpoint_;
  SamplingConfig sampling_;
};

}  // namespace ikbqa
