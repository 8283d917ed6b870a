#include "ikbqa/exemplar.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>

#include "ikbqa/action.hpp"
#include "json.hpp"

namespace ikbqa {

void validate_exemplar(const Exemplar& ex) {
  const std::string who = "exemplar \"" + ex.question + "\"";
  if (ex.question.empty()) throw ExemplarError("exemplar without a question");
  if (ex.turns.empty()) throw ExemplarError(who + " has no turns");
  for (std::size_t i = 0; i < ex.turns.size(); ++i) {
    const auto& t = ex.turns[i];
    const auto parsed = parse_action(t.actionText);
    if (!parsed.ok()) throw ExemplarError(who + " turn " + std::to_string(i) + ": " + parsed.error);
    const bool last = i + 1 == ex.turns.size();
    if (last != (parsed.action->kind == ActionKind::Done))
      throw ExemplarError(who + (last ? " does not end with Done" : " has Done before its last turn"));
    if (!last && t.observationText.empty())
      throw ExemplarError(who + " turn " + std::to_string(i) + " has no observation");
  }
}

std::string serialize_exemplar(const Exemplar& ex) {
  std::string out = "Q: " + ex.question;
  for (const auto& t : ex.turns) {
    out += "\nThought: " + t.thought;
    out += "\nAction: " + t.actionText;
    if (!t.observationText.empty()) out += "\nObservation: " + t.observationText;
  }
  return out;
}

Exemplar parse_exemplar_text(std::string_view text, const QuestionType& type) {
  Exemplar ex;
  ex.type = type;
  enum class Field { None, Question, Thought, Action, Observation };
  Field field = Field::None;
  std::string* target = nullptr;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    auto starts = [&](std::string_view marker) { return line.substr(0, marker.size()) == marker; };
    auto body = [&](std::size_t n) {
      std::string_view rest = line.substr(n);
      if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      return std::string(rest);
    };
    if (starts("Q:") && field == Field::None) {
      ex.question = body(2);
      field = Field::Question;
      target = &ex.question;
    } else if (starts("Thought:")) {
      ex.turns.push_back({body(8), "", ""});
      field = Field::Thought;
      target = &ex.turns.back().thought;
    } else if (starts("Action:") && field == Field::Thought) {
      ex.turns.back().actionText = body(7);
      field = Field::Action;
      target = &ex.turns.back().actionText;
    } else if (starts("Observation:") && field == Field::Action) {
      ex.turns.back().observationText = body(12);
      field = Field::Observation;
      target = &ex.turns.back().observationText;
    } else if (target) {
      *target += '\n';
      *target += line;
    } else if (!line.empty()) {
      throw ExemplarError("exemplar text must start with \"Q:\"");
    }
    pos = nl + 1;
  }
  return ex;
}

namespace {

nlohmann::json type_header(const QuestionType& type) {
  return {{"type", "questionType"}, {"dataset", dataset_name(type.dataset)}, {"label", type.label}};
}

}  // namespace

std::vector<Exemplar> load_exemplar_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ExemplarError("cannot open exemplar file " + path.string());
  std::vector<Exemplar> out;
  std::optional<QuestionType> type;
  std::string line;
  std::size_t lineNo = 0;
  bool open = false;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineNo);
    try {
      const auto ev = nlohmann::json::parse(line);
      const auto kind = ev.at("type").get<std::string>();
      if (kind == "questionType") {
        type = make_question_type(parse_dataset(ev.at("dataset").get<std::string>()), ev.at("label").get<std::string>());
        continue;
      }
      if (!type) throw ExemplarError(where + ": missing questionType header");
      if (kind == "prompt") {
        Exemplar ex;
        ex.type = *type;
        ex.question = ev.at("prompt").at("question").get<std::string>();
        out.push_back(std::move(ex));
        open = true;
      } else if (kind == "turn" || kind == "correction") {
        if (!open) throw ExemplarError(where + ": turn outside an exemplar");
        const auto& t = ev.at("turn");
        out.back().turns.push_back({t.at("thought").get<std::string>(), t.at("actionText").get<std::string>(),
                                    t.at("observation").at("text").get<std::string>()});
      } else if (kind == "final") {
        if (!open) throw ExemplarError(where + ": final outside an exemplar");
        out.back().turns.push_back({ev.value("thought", std::string()), ev.value("actionText", std::string("Done")), ""});
        open = false;
      }
    } catch (const nlohmann::json::exception& e) {
      throw ExemplarError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ExemplarError(where + ": " + e.what());
    }
  }
  if (open) throw ExemplarError(path.string() + ": last exemplar has no final event");
  for (const auto& ex : out) validate_exemplar(ex);
  return out;
}

void write_exemplar_file(const std::filesystem::path& path, const std::vector<Exemplar>& exemplars) {
  if (exemplars.empty()) throw ExemplarError("nothing to write");
  std::ofstream out(path);
  if (!out) throw ExemplarError("cannot write " + path.string());
  out << type_header(exemplars.front().type).dump() << '\n';
  for (const auto& ex : exemplars) {
    if (ex.type != exemplars.front().type) throw ExemplarError("one question type per exemplar file");
    validate_exemplar(ex);
    out << nlohmann::json{{"type", "prompt"}, {"prompt", {{"question", ex.question}}}}.dump() << '\n';
    for (std::size_t i = 0; i + 1 < ex.turns.size(); ++i) {
      const auto& t = ex.turns[i];
      nlohmann::json turn = {{"index", i},
                             {"thought", t.thought},
                             {"actionText", t.actionText},
                             {"observation", {{"text", t.observationText}}}};
      out << nlohmann::json{{"type", "turn"}, {"turn", turn}}.dump() << '\n';
    }
    const auto& last = ex.turns.back();
    out << nlohmann::json{{"type", "final"}, {"thought", last.thought}, {"actionText", last.actionText}}.dump() << '\n';
  }
}

std::string exemplar_file_name(const QuestionType& type) { return type.label + ".jsonl"; }

void ExemplarStore::add(Exemplar exemplar) {
  validate_exemplar(exemplar);
  byType_[exemplar.type].push_back(std::move(exemplar));
}

void ExemplarStore::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ExemplarError("no exemplar directory " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files)
    for (auto& ex : load_exemplar_file(f)) add(std::move(ex));
}

const std::vector<Exemplar>& ExemplarStore::of_type(const QuestionType& type) const {
  static const std::vector<Exemplar> none;
  auto it = byType_.find(type);
  return it == byType_.end() ? none : it->second;
}

std::size_t ExemplarStore::size() const {
  std::size_t n = 0;
  for (const auto& [type, list] : byType_) n += list.size();
  return n;
}

ExemplarSelection ExemplarStore::select(const QuestionType& type, std::size_t shots,
                                        const QuestionType* fallback) const {
  ExemplarSelection sel;
  if (shots == 0) return sel;
  if (shots == kAllShots) {
    for (const auto& label : labels_for(type.dataset))
      for (const auto& ex : of_type({type.dataset, label})) sel.exemplars.push_back(ex);
    return sel;
  }
  const auto* list = &of_type(type);
  if (list->size() < shots && fallback && *fallback != type) {
    sel.warning = "only " + std::to_string(list->size()) + " exemplars for " + to_string(type) + ", using " +
                  to_string(*fallback);
    list = &of_type(*fallback);
  }
  const std::size_t n = std::min(shots, list->size());
  sel.exemplars.assign(list->begin(), list->begin() + static_cast<std::ptrdiff_t>(n));
  return sel;
}

}  // namespace ikbqa
