#include "ikbqa/transcript.hpp"

namespace ikbqa {

using nlohmann::json;

json to_json(const Action& action) { return {{"tool", tool_name(action.kind)}, {"args", action.args}}; }

Action action_from_json(const json& j) {
  const auto name = j.at("tool").get<std::string>();
  for (auto k : {ActionKind::SearchNodes, ActionKind::SearchGraphPatterns, ActionKind::ExecuteSPARQL, ActionKind::Done})
    if (tool_name(k) == name) return {k, j.at("args").get<std::vector<std::string>>()};
  throw TranscriptError("unknown tool in transcript: " + name);
}

namespace {

json usage_json(const TokenUsage& u) { return {{"prompt", u.prompt}, {"completion", u.completion}}; }

TokenUsage usage_from(const json& j) {
  if (!j.is_object()) return {};
  return {j.value("prompt", std::int64_t{0}), j.value("completion", std::int64_t{0})};
}

}  // namespace

json to_json(const Proposal& p) {
  return {{"thought", p.thought},
          {"actionText", p.actionText},
          {"rawText", p.rawText},
          {"usage", usage_json(p.usage)},
          {"parseFailed", p.parseFailed}};
}

Proposal proposal_from_json(const json& j) {
  Proposal p;
  p.thought = j.at("thought").get<std::string>();
  p.actionText = j.at("actionText").get<std::string>();
  p.rawText = j.value("rawText", std::string());
  p.usage = usage_from(j.value("usage", json()));
  p.parseFailed = j.value("parseFailed", false);
  return p;
}

json to_json(const Turn& t) {
  json j = {{"index", t.index},
            {"thought", t.thought},
            {"actionText", t.actionText},
            {"observation", to_json(t.observation)},
            {"corrected", t.corrected},
            {"usage", usage_json(t.usage)}};
  j["action"] = t.action ? to_json(*t.action) : json();
  if (t.correctionOf) j["correctionOf"] = to_json(*t.correctionOf);
  return j;
}

Turn turn_from_json(const json& j) {
  Turn t;
  t.index = j.at("index").get<std::size_t>();
  t.thought = j.at("thought").get<std::string>();
  t.actionText = j.at("actionText").get<std::string>();
  t.observation = observation_from_json(j.at("observation"));
  t.corrected = j.value("corrected", false);
  t.usage = usage_from(j.value("usage", json()));
  if (j.contains("action") && !j["action"].is_null()) t.action = action_from_json(j["action"]);
  if (j.contains("correctionOf")) t.correctionOf = proposal_from_json(j["correctionOf"]);
  return t;
}

json to_json(const Exemplar& ex) {
  json turns = json::array();
  for (const auto& t : ex.turns)
    turns.push_back({{"thought", t.thought}, {"actionText", t.actionText}, {"observationText", t.observationText}});
  return {{"questionType", to_string(ex.type)}, {"question", ex.question}, {"turns", turns}};
}

Exemplar exemplar_from_json(const json& j) {
  Exemplar ex;
  ex.type = parse_question_type(j.at("questionType").get<std::string>());
  ex.question = j.at("question").get<std::string>();
  for (const auto& t : j.at("turns"))
    ex.turns.push_back({t.at("thought").get<std::string>(), t.at("actionText").get<std::string>(),
                        t.value("observationText", std::string())});
  return ex;
}

json to_json(const PromptParts& p) {
  json ex = json::array();
  for (const auto& e : p.exemplars) ex.push_back(to_json(e));
  return {{"instruction", p.instruction}, {"exemplars", ex}, {"question", p.question}};
}

PromptParts prompt_from_json(const json& j) {
  PromptParts p;
  p.instruction = j.at("instruction").get<std::string>();
  for (const auto& e : j.at("exemplars")) p.exemplars.push_back(exemplar_from_json(e));
  p.question = j.at("question").get<std::string>();
  return p;
}

json make_event(const DialogueSession& s, std::string_view type) {
  json ev = {{"type", type},
             {"seq", s.events},
             {"session", s.id},
             {"status", to_string(s.status)},
             {"utterances", s.utteranceCount},
             {"interventions", s.interventions},
             {"cost",
              {{"promptTokens", s.cost.promptTokens},
               {"completionTokens", s.cost.completionTokens},
               {"dollars", s.cost.dollars}}}};
  if (type == "prompt") {
    ev["question"] = s.question;
    ev["dataset"] = s.dataset;
    ev["kbRef"] = s.kbRef;
    ev["mode"] = to_string(s.options.mode);
    ev["maxTurns"] = s.options.maxTurns;
    ev["prices"] = {{"inputPer1k", s.options.prices.inputPer1k}, {"outputPer1k", s.options.prices.outputPer1k}};
    ev["questionType"] = s.questionType ? json(to_string(*s.questionType)) : json();
    ev["agent"] = s.agentSpec;
  }
  return ev;
}

TranscriptWriter::TranscriptWriter(const std::filesystem::path& path, bool truncate)
    : path_(path), out_(path, truncate ? std::ios::trunc : std::ios::app) {
  if (!out_) throw TranscriptError("cannot open transcript " + path.string());
}

void TranscriptWriter::write(const json& event) {
  std::lock_guard lock(mutex_);
  out_ << event.dump() << '\n';
  out_.flush();
}

EventSink TranscriptWriter::sink() {
  return [this](const json& ev) { write(ev); };
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TranscriptError("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw TranscriptError(path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return out;
}

DialogueSession session_from_events(const std::vector<json>& events) {
  DialogueSession s;
  bool started = false;
  try {
    for (const auto& ev : events) {
      const auto type = ev.at("type").get<std::string>();
      if (type == "questionType") continue;
      if (type == "prompt") {
        if (started) throw TranscriptError("second prompt event in one transcript");
        started = true;
        s.id = ev.value("session", std::string());
        s.prompt = prompt_from_json(ev.at("prompt"));
        s.question = ev.value("question", s.prompt.question);
        s.dataset = ev.value("dataset", std::string());
        s.kbRef = ev.value("kbRef", std::string());
        s.options.mode = parse_review_mode(ev.value("mode", std::string("auto")));
        s.options.maxTurns = ev.value("maxTurns", 20);
        if (ev.contains("prices")) {
          s.options.prices.inputPer1k = ev["prices"].value("inputPer1k", 0.01);
          s.options.prices.outputPer1k = ev["prices"].value("outputPer1k", 0.03);
        }
        if (ev.contains("questionType") && ev["questionType"].is_string())
          s.questionType = parse_question_type(ev["questionType"].get<std::string>());
        s.agentSpec = ev.value("agent", json());
      } else if (!started) {
        throw TranscriptError("transcript must start with a prompt event");
      } else if (type == "proposal") {
        s.pending = proposal_from_json(ev.at("proposal"));
      } else if (type == "turn" || type == "correction") {
        s.pending.reset();
        s.history.push_back(turn_from_json(ev.at("turn")));
        if (s.history.back().index + 1 != s.history.size()) throw TranscriptError("turn indices are not contiguous");
      } else if (type == "final") {
        s.pending.reset();
        s.finalThought = ev.value("thought", std::string());
        if (ev.contains("answer")) s.answer = ev["answer"].get<std::vector<std::string>>();
        s.error = ev.value("error", std::string());
      } else {
        throw TranscriptError("unknown event type " + type);
      }
      s.status = parse_session_status(ev.at("status").get<std::string>());
      s.utteranceCount = ev.at("utterances").get<int>();
      s.interventions = ev.value("interventions", 0);
      const auto& cost = ev.at("cost");
      s.cost.promptTokens = cost.at("promptTokens").get<std::int64_t>();
      s.cost.completionTokens = cost.at("completionTokens").get<std::int64_t>();
      s.cost.dollars = dollars_for(s.cost.promptTokens, s.cost.completionTokens, s.options.prices);
      s.events = ev.value("seq", s.events) + 1;
    }
  } catch (const json::exception& e) {
    throw TranscriptError(std::string("malformed transcript event: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw TranscriptError(std::string("malformed transcript event: ") + e.what());
  }
  if (!started) throw TranscriptError("transcript has no prompt event");
  return s;
}

DialogueSession load_transcript(const std::filesystem::path& path) { return session_from_events(read_jsonl(path)); }

}  // namespace ikbqa
