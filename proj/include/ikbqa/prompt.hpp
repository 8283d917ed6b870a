#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ikbqa/action.hpp"
#include "ikbqa/agent.hpp"
#include "ikbqa/exemplar.hpp"
#include "ikbqa/observation.hpp"

namespace ikbqa {

struct PromptParts {
  std::string instruction;
  std::vector<Exemplar> exemplars;
  std::string question;

  friend bool operator==(const PromptParts&, const PromptParts&) = default;
};

struct Proposal {
  std::string thought;
  std::string actionText;
  std::string rawText;
  TokenUsage usage;
  bool parseFailed = false;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

struct Turn {
  std::size_t index = 0;
  std::string thought;
  std::string actionText;
  std::optional<Action> action;  // empty when actionText did not parse
  Observation observation;
  bool corrected = false;
  /// The agent's original (thought, actionText) when a human replaced it.
  std::optional<Proposal> correctionOf;
  TokenUsage usage;

  friend bool operator==(const Turn&, const Turn&) = default;
};

class PromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exemplars and the live question as one user message: each exemplar's
/// serialization, then "Q: {question}", separated by blank lines.
std::string render_task(const PromptParts& parts);

/// system: instruction; user: render_task; then per turn an assistant
/// "Thought:/Action:" message and a user "Observation:" message.
std::vector<ChatMessage> build_prompt(const PromptParts& parts, const std::vector<Turn>& history);

/// Single-string form of a message list, for diffing and logging.
std::string flatten_prompt(const std::vector<ChatMessage>& messages);

}  // namespace ikbqa
