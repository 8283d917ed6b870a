#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ikbqa/classifier.hpp"
#include "ikbqa/config.hpp"
#include "ikbqa/dialogue.hpp"
#include "ikbqa/exemplar.hpp"
#include "ikbqa/knowledge_base.hpp"
#include "ikbqa/name_index.hpp"
#include "ikbqa/similarity.hpp"
#include "ikbqa/toolbox.hpp"

namespace ikbqa {

/// Everything a dataset needs at query time. Built once and never moved:
/// the index, toolbox and engine point into the KB.
struct DatasetResources {
  DatasetConfig config;
  KnowledgeBase kb;
  NameIndex index;
  std::unique_ptr<SimilarityRanker> ranker;
  std::unique_ptr<Toolbox> tools;
  std::unique_ptr<DialogueEngine> engine;
  ExemplarStore exemplars;
  std::unique_ptr<CentroidClassifier> classifier;
  std::string instruction;
  std::vector<std::string> warnings;
};

struct SessionRequest {
  std::string id;
  std::string question;
  std::string dataset;
  std::optional<ReviewMode> mode;
  std::optional<std::size_t> shots;
  /// Skips the classifier when set.
  std::optional<QuestionType> type;
  nlohmann::json agentSpec;
  EventSink sink;
};

/// Lazily loads datasets named in the config. Safe to share across threads.
class Workspace {
 public:
  explicit Workspace(EngineConfig config);

  const EngineConfig& config() const { return config_; }
  /// Throws ConfigError for unknown datasets and load errors.
  const DatasetResources& dataset(const std::string& name);

  /// Classifies the question, selects exemplars and begins the session.
  DialogueSession prepare(SessionRequest request);

  /// Agent for a session: {"kind": "scripted", "script": [...]} or
  /// {"kind": "llm"}. Scripted agents skip the first `consumed` steps.
  std::unique_ptr<Agent> make_agent(const nlohmann::json& spec, ReviewMode mode, std::size_t consumed = 0) const;

 private:
  EngineConfig config_;
  std::mutex mutex_;
  std::map<std::string, std::unique_ptr<DatasetResources>> loaded_;
};

/// 64-bit FNV-1a of a file's bytes.
std::uint64_t file_fingerprint(const std::filesystem::path& path);

/// Writes {kb, fingerprint, triples, names, corpus} so later loads can skip
/// recomputing the ranker corpus.
void write_index_cache(const std::filesystem::path& out, const std::filesystem::path& kbPath,
                       const KnowledgeBase& kb, const NameIndex& index);
/// Corpus from a cache file whose fingerprint matches the KB, else nothing.
std::optional<std::vector<std::string>> read_index_cache(const std::filesystem::path& cache,
                                                         const std::filesystem::path& kbPath);
std::filesystem::path index_cache_path(const std::filesystem::path& cacheDir, const std::filesystem::path& kbPath);

/// Script steps as JSON: [{"thought": ..., "action": ...}]
nlohmann::json script_to_json(const std::vector<std::pair<std::string, std::string>>& steps);

}  // namespace ikbqa
