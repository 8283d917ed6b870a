#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ikbqa/dialogue.hpp"
#include "ikbqa/metrics.hpp"
#include "ikbqa/question_type.hpp"
#include "json.hpp"

namespace ikbqa {

struct BenchmarkQuestion {
  std::string id;
  std::string question;
  QuestionType type;
  std::vector<std::string> goldAnswers;
  std::optional<std::string> goldSparql;
  /// Scripted-agent steps for replay runs, if the file provides them.
  nlohmann::json script;
};

/// JSONL rows {id, question, type: "CWQ/Superlative", goldAnswers, goldSparql?,
/// script?}. A script given as a string is a path relative to the file.
std::vector<BenchmarkQuestion> load_questions(const std::filesystem::path& path);

struct EvalRecord {
  std::string questionId;
  QuestionType questionType;
  std::vector<std::string> gold;
  std::vector<std::string> predicted;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int em = 0;
  double rhits1 = 0.0;
  double rhits1Expected = 0.0;
  int acc = 0;
  int utterances = 0;
  int interventions = 0;
  double dollars = 0.0;
  SessionStatus status = SessionStatus::Failed;
  std::string error;
};

struct MetricOptions {
  std::size_t rhitsTrials = 100;
  std::uint64_t seed = 0;
  EmRule emRule = EmRule::FirstPredicted;
};

/// Scores a finished session. Sessions that did not reach Done score zero.
EvalRecord score_session(const BenchmarkQuestion& q, const DialogueSession& session, const MetricOptions& options);

struct GroupSummary {
  std::string group;
  std::size_t count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double em = 0.0;
  double rhits1 = 0.0;
  double rhits1Expected = 0.0;
  double acc = 0.0;
  double utterances = 0.0;
  double interventions = 0.0;
  double dollars = 0.0;
  std::size_t successes = 0;
  double successRate = 0.0;
};

struct BenchmarkReport {
  std::vector<EvalRecord> records;
  std::vector<GroupSummary> byType;  // sorted by type name
  GroupSummary overall;
  MetricOptions options;

  nlohmann::json to_json() const;
  /// Fixed-width table, one row per type plus "overall".
  std::string table() const;
};

GroupSummary summarize(const std::string& group, const std::vector<const EvalRecord*>& records);
BenchmarkReport build_report(std::vector<EvalRecord> records, const MetricOptions& options);

/// Runs one question to a terminal session. May throw; the harness records
/// a failure then.
using SessionRunner = std::function<DialogueSession(const BenchmarkQuestion&)>;

/// Runs every question, up to `jobs` at a time, and reports in question order.
BenchmarkReport run_benchmark(const std::vector<BenchmarkQuestion>& questions, const SessionRunner& runner,
                              const MetricOptions& options, int jobs = 1);

}  // namespace ikbqa
