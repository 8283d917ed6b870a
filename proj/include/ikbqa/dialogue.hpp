#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ikbqa/agent.hpp"
#include "ikbqa/prompt.hpp"
#include "ikbqa/question_type.hpp"
#include "ikbqa/toolbox.hpp"
#include "json.hpp"

namespace ikbqa {

enum class SessionStatus { Running, AwaitingReview, Done, Exhausted, Failed };
std::string_view to_string(SessionStatus status);
SessionStatus parse_session_status(std::string_view text);

enum class ReviewMode { Auto, Review };
std::string_view to_string(ReviewMode mode);
ReviewMode parse_review_mode(std::string_view text);

struct PriceTable {
  double inputPer1k = 0.01;
  double outputPer1k = 0.03;
};

struct TokenCost {
  std::int64_t promptTokens = 0;
  std::int64_t completionTokens = 0;
  double dollars = 0.0;

  friend bool operator==(const TokenCost&, const TokenCost&) = default;
};

double dollars_for(std::int64_t promptTokens, std::int64_t completionTokens, const PriceTable& prices);

struct DialogueOptions {
  int maxTurns = 20;  // utterances; must be even
  ReviewMode mode = ReviewMode::Auto;
  PriceTable prices;
};

using EventSink = std::function<void(const nlohmann::json&)>;

struct DialogueSession {
  std::string id;
  std::string question;
  std::string dataset;
  std::string kbRef;
  std::optional<QuestionType> questionType;
  /// How to rebuild the agent after a restart ({"kind": "llm"} or a script).
  nlohmann::json agentSpec;
  PromptParts prompt;
  DialogueOptions options;

  std::vector<Turn> history;
  SessionStatus status = SessionStatus::Running;
  std::optional<std::vector<std::string>> answer;
  int utteranceCount = 0;
  TokenCost cost;
  int interventions = 0;
  std::optional<Proposal> pending;
  /// Thought of the closing Done, and the failure reason for Failed.
  std::string finalThought;
  std::string error;
  std::size_t events = 0;

  /// Receives one JSON object per state transition. Not persisted.
  EventSink sink;

  bool terminal() const {
    return status == SessionStatus::Done || status == SessionStatus::Exhausted || status == SessionStatus::Failed;
  }
};

class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A human correction whose action does not parse. Carries the diagnostic.
class CorrectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Runs the thought/action/observation loop over a toolbox. Stateless apart
/// from the toolbox reference; all state lives in DialogueSession.
class DialogueEngine {
 public:
  explicit DialogueEngine(const Toolbox& tools) : tools_(&tools) {}

  /// New Running session; emits the "prompt" event.
  DialogueSession start(std::string id, std::string question, PromptParts prompt, DialogueOptions options,
                        EventSink sink = {}) const;
  /// Same, for a session whose identity fields (id, question, dataset,
  /// kbRef, questionType, prompt, options, sink) are already filled in.
  void begin(DialogueSession& session) const;

  /// Messages the agent sees next: a pure function of the prompt parts and
  /// the (corrected) history.
  std::vector<ChatMessage> prompt_messages(const DialogueSession& session) const;

  Observation execute(const Action& action) const;

  /// Applies an agent reply to a Running session.
  void step(DialogueSession& session, const AgentReply& reply) const;

  /// Asks the agent for the next move. Auto mode applies it at once; review
  /// mode parks it as the pending proposal. Agent errors fail the session.
  void propose(DialogueSession& session, Agent& agent) const;

  /// Executes the pending proposal unchanged.
  void accept(DialogueSession& session) const;

  /// Replaces the pending proposal with a human-written one and executes it.
  /// Throws CorrectionError (state untouched) if the new action is malformed.
  void revise(DialogueSession& session, std::string thought, std::string actionText) const;

  void fail(DialogueSession& session, std::string reason) const;

  /// propose() until the session is terminal or awaits review.
  void run(DialogueSession& session, Agent& agent) const;

  const Toolbox& tools() const { return *tools_; }

 private:
  void apply(DialogueSession& session, const Proposal& proposal, std::optional<Proposal> original) const;

  const Toolbox* tools_;
};

/// Display strings of the most recent ResultList observation, or empty.
std::vector<std::string> latest_answer(const std::vector<Turn>& history);

}  // namespace ikbqa
