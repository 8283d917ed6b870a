#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ikbqa/question_type.hpp"

namespace ikbqa {

struct ExemplarTurn {
  std::string thought;
  std::string actionText;
  std::string observationText;  // empty for the closing Done

  friend bool operator==(const ExemplarTurn&, const ExemplarTurn&) = default;
};

/// A complete annotated dialogue used as an in-context demonstration.
struct Exemplar {
  QuestionType type;
  std::string question;
  std::vector<ExemplarTurn> turns;

  friend bool operator==(const Exemplar&, const Exemplar&) = default;
};

class ExemplarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ExemplarError unless every action parses, every non-final turn has
/// an observation and the last action is Done.
void validate_exemplar(const Exemplar& exemplar);

/// Prompt text: "Q: ..." then Thought:/Action:/Observation: blocks, ending
/// with "Action: Done".
std::string serialize_exemplar(const Exemplar& exemplar);
Exemplar parse_exemplar_text(std::string_view text, const QuestionType& type);

/// Exemplar files are transcript-style JSONL: a questionType header line,
/// then per exemplar a prompt event, turn events and a final event.
std::vector<Exemplar> load_exemplar_file(const std::filesystem::path& path);
void write_exemplar_file(const std::filesystem::path& path, const std::vector<Exemplar>& exemplars);

inline constexpr std::size_t kAllShots = std::numeric_limits<std::size_t>::max();

struct ExemplarSelection {
  std::vector<Exemplar> exemplars;
  std::string warning;  // set when the fallback type was used
};

class ExemplarStore {
 public:
  void add(Exemplar exemplar);
  /// Loads every <Label>.jsonl file of a dataset directory.
  void load_directory(const std::filesystem::path& dir);

  const std::vector<Exemplar>& of_type(const QuestionType& type) const;
  std::size_t size() const;

  /// Stored-order prefix of the type's exemplars. kAllShots takes every
  /// exemplar of the dataset, label order then file order. Types without
  /// enough exemplars fall back to `fallback` with a warning.
  ExemplarSelection select(const QuestionType& type, std::size_t shots, const QuestionType* fallback = nullptr) const;

 private:
  std::map<QuestionType, std::vector<Exemplar>> byType_;
};

/// "Conjunction" -> "Conjunction.jsonl"; labels are already file-safe.
std::string exemplar_file_name(const QuestionType& type);

}  // namespace ikbqa
