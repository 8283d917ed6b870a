#include "ikbqa/dialogue.hpp"

#include "ikbqa/transcript.hpp"

namespace ikbqa {

std::string_view to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Running: return "Running";
    case SessionStatus::AwaitingReview: return "AwaitingReview";
    case SessionStatus::Done: return "Done";
    case SessionStatus::Exhausted: return "Exhausted";
    case SessionStatus::Failed: return "Failed";
  }
  return "Failed";
}

SessionStatus parse_session_status(std::string_view text) {
  for (auto s : {SessionStatus::Running, SessionStatus::AwaitingReview, SessionStatus::Done, SessionStatus::Exhausted,
                 SessionStatus::Failed})
    if (to_string(s) == text) return s;
  throw std::invalid_argument("unknown session status: " + std::string(text));
}

std::string_view to_string(ReviewMode mode) { return mode == ReviewMode::Auto ? "auto" : "review"; }

ReviewMode parse_review_mode(std::string_view text) {
  if (text == "auto") return ReviewMode::Auto;
  if (text == "review") return ReviewMode::Review;
  throw std::invalid_argument("mode must be auto or review, got " + std::string(text));
}

double dollars_for(std::int64_t promptTokens, std::int64_t completionTokens, const PriceTable& prices) {
  return static_cast<double>(promptTokens) / 1000.0 * prices.inputPer1k +
         static_cast<double>(completionTokens) / 1000.0 * prices.outputPer1k;
}

std::vector<std::string> latest_answer(const std::vector<Turn>& history) {
  for (auto it = history.rbegin(); it != history.rend(); ++it)
    if (it->observation.kind == ObservationKind::ResultList) return it->observation.answers();
  return {};
}

namespace {

void emit(DialogueSession& s, nlohmann::json event) {
  ++s.events;
  if (s.sink) s.sink(event);
}

void charge(DialogueSession& s, const TokenUsage& usage) {
  s.cost.promptTokens += usage.prompt;
  s.cost.completionTokens += usage.completion;
  s.cost.dollars = dollars_for(s.cost.promptTokens, s.cost.completionTokens, s.options.prices);
}

Proposal to_proposal(const AgentReply& r) { return {r.thought, r.actionText, r.rawText, r.usage, r.parseFailed}; }

}  // namespace

DialogueSession DialogueEngine::start(std::string id, std::string question, PromptParts prompt,
                                      DialogueOptions options, EventSink sink) const {
  DialogueSession s;
  s.id = std::move(id);
  s.question = std::move(question);
  s.prompt = std::move(prompt);
  s.options = options;
  s.sink = std::move(sink);
  begin(s);
  return s;
}

void DialogueEngine::begin(DialogueSession& s) const {
  if (s.options.maxTurns < 2 || s.options.maxTurns % 2 != 0)
    throw std::invalid_argument("maxTurns must be a positive even number");
  if (s.events != 0 || !s.history.empty()) throw StateError("session already started");
  s.prompt.question = s.question;
  s.status = SessionStatus::Running;
  build_prompt(s.prompt, {});  // surfaces PromptError before anything is recorded
  auto ev = make_event(s, "prompt");
  ev["prompt"] = to_json(s.prompt);
  emit(s, std::move(ev));
}

std::vector<ChatMessage> DialogueEngine::prompt_messages(const DialogueSession& session) const {
  return build_prompt(session.prompt, session.history);
}

Observation DialogueEngine::execute(const Action& action) const {
  switch (action.kind) {
    case ActionKind::SearchNodes: return tools_->search_nodes(action.args.at(0));
    case ActionKind::SearchGraphPatterns: return tools_->search_graph_patterns(action.args.at(0), action.args.at(1));
    case ActionKind::ExecuteSPARQL: return tools_->execute_sparql(action.args.at(0));
    case ActionKind::Done: break;
  }
  return Observation::error("Done does not run a tool");
}

void DialogueEngine::apply(DialogueSession& s, const Proposal& p, std::optional<Proposal> original) const {
  const bool corrected = original.has_value();
  const auto parsed = parse_action(p.actionText);
  if (parsed.ok() && parsed.action->kind == ActionKind::Done) {
    s.utteranceCount += 1;
    s.status = SessionStatus::Done;
    s.finalThought = p.thought;
    s.answer = latest_answer(s.history);
    auto ev = make_event(s, "final");
    ev["thought"] = p.thought;
    ev["actionText"] = p.actionText;
    ev["answer"] = *s.answer;
    if (corrected) {
      ev["corrected"] = true;
      ev["correctionOf"] = to_json(*original);
    }
    emit(s, std::move(ev));
    return;
  }

  Turn t;
  t.index = s.history.size();
  t.thought = p.thought;
  t.actionText = p.actionText;
  t.usage = corrected ? original->usage : p.usage;
  t.corrected = corrected;
  t.correctionOf = std::move(original);
  if (parsed.ok()) {
    t.action = parsed.action;
    t.observation = execute(*parsed.action);
  } else {
    t.observation = Observation::error(parsed.error);
  }
  s.history.push_back(std::move(t));
  s.utteranceCount += 2;
  s.status = s.utteranceCount >= s.options.maxTurns ? SessionStatus::Exhausted : SessionStatus::Running;
  auto ev = make_event(s, corrected ? "correction" : "turn");
  ev["turn"] = to_json(s.history.back());
  emit(s, std::move(ev));
}

void DialogueEngine::step(DialogueSession& s, const AgentReply& reply) const {
  if (s.status != SessionStatus::Running)
    throw StateError("cannot step a session in state " + std::string(to_string(s.status)));
  charge(s, reply.usage);
  apply(s, to_proposal(reply), std::nullopt);
}

void DialogueEngine::propose(DialogueSession& s, Agent& agent) const {
  if (s.status != SessionStatus::Running)
    throw StateError("cannot propose in state " + std::string(to_string(s.status)));
  AgentReply reply;
  try {
    reply = agent.reply(prompt_messages(s));
  } catch (const AgentError& e) {
    fail(s, e.what());
    return;
  }
  if (s.options.mode == ReviewMode::Auto) {
    step(s, reply);
    return;
  }
  charge(s, reply.usage);
  s.pending = to_proposal(reply);
  s.status = SessionStatus::AwaitingReview;
  auto ev = make_event(s, "proposal");
  ev["proposal"] = to_json(*s.pending);
  emit(s, std::move(ev));
}

void DialogueEngine::accept(DialogueSession& s) const {
  if (s.status != SessionStatus::AwaitingReview || !s.pending)
    throw StateError("nothing to accept in state " + std::string(to_string(s.status)));
  Proposal p = std::move(*s.pending);
  s.pending.reset();
  apply(s, p, std::nullopt);
}

void DialogueEngine::revise(DialogueSession& s, std::string thought, std::string actionText) const {
  if (s.status != SessionStatus::AwaitingReview || !s.pending)
    throw StateError("nothing to revise in state " + std::string(to_string(s.status)));
  const auto parsed = parse_action(actionText);
  if (!parsed.ok()) throw CorrectionError(parsed.error);
  if (thought == s.pending->thought && actionText == s.pending->actionText) {
    accept(s);
    return;
  }
  Proposal original = std::move(*s.pending);
  s.pending.reset();
  Proposal replacement;
  replacement.thought = std::move(thought);
  replacement.actionText = std::move(actionText);
  replacement.rawText = "Thought: " + replacement.thought + "\nAction: " + replacement.actionText;
  ++s.interventions;
  apply(s, replacement, std::move(original));
}

void DialogueEngine::fail(DialogueSession& s, std::string reason) const {
  if (s.terminal()) throw StateError("session already finished");
  s.pending.reset();
  s.status = SessionStatus::Failed;
  s.error = std::move(reason);
  auto ev = make_event(s, "final");
  ev["error"] = s.error;
  emit(s, std::move(ev));
}

void DialogueEngine::run(DialogueSession& s, Agent& agent) const {
  while (s.status == SessionStatus::Running) propose(s, agent);
}

}  // namespace ikbqa
