#include "ikbqa/prompt.hpp"

namespace ikbqa {

std::string render_task(const PromptParts& parts) {
  std::string out;
  for (const auto& ex : parts.exemplars) {
    try {
      validate_exemplar(ex);
    } catch (const ExemplarError& e) {
      throw PromptError(std::string("bad exemplar: ") + e.what());
    }
    out += serialize_exemplar(ex);
    out += "\n\n";
  }
  out += "Q: " + parts.question;
  return out;
}

std::vector<ChatMessage> build_prompt(const PromptParts& parts, const std::vector<Turn>& history) {
  if (parts.instruction.empty()) throw PromptError("instruction text is empty");
  std::vector<ChatMessage> messages;
  messages.reserve(2 + 2 * history.size());
  messages.push_back({"system", parts.instruction});
  messages.push_back({"user", render_task(parts)});
  for (const auto& t : history) {
    messages.push_back({"assistant", "Thought: " + t.thought + "\nAction: " + t.actionText});
    messages.push_back({"user", "Observation: " + t.observation.text});
  }
  return messages;
}

std::string flatten_prompt(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    out += "[" + m.role + "]\n";
    out += m.content;
    out += "\n";
  }
  return out;
}

}  // namespace ikbqa
