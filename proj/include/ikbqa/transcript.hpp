#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ikbqa/dialogue.hpp"
#include "json.hpp"

namespace ikbqa {

nlohmann::json to_json(const Action& action);
Action action_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Proposal& proposal);
Proposal proposal_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Turn& turn);
Turn turn_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Exemplar& exemplar);
Exemplar exemplar_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PromptParts& parts);
PromptParts prompt_from_json(const nlohmann::json& j);

/// Event skeleton shared by every transcript line: type, sequence number
/// and the session state after the transition.
nlohmann::json make_event(const DialogueSession& session, std::string_view type);

class TranscriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Appends events as JSON lines, flushing after each. Thread-safe.
class TranscriptWriter {
 public:
  explicit TranscriptWriter(const std::filesystem::path& path, bool truncate = true);

  void write(const nlohmann::json& event);
  EventSink sink();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// Rebuilds a session by replaying its events. The sink is left empty.
DialogueSession session_from_events(const std::vector<nlohmann::json>& events);
DialogueSession load_transcript(const std::filesystem::path& path);

}  // namespace ikbqa
