#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "ikbqa/agent.hpp"
#include "ikbqa/dialogue.hpp"
#include "ikbqa/exemplar.hpp"
#include "ikbqa/knowledge_base.hpp"
#include "ikbqa/question_type.hpp"
#include "ikbqa/similarity.hpp"
#include "ikbqa/toolbox.hpp"
#include "json.hpp"

namespace ikbqa {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetConfig {
  Dataset dataset = Dataset::CWQ;
  std::filesystem::path kbPath;
  SchemaProfile profile = SchemaProfile::FreebaseLike;
  std::filesystem::path instructionPath;
  std::filesystem::path exemplarDir;
  std::filesystem::path classifierPath;  // empty: always use defaultType
  std::size_t shots = 2;                 // kAllShots for "all"
  std::string defaultType;
};

struct EngineConfig {
  std::map<std::string, DatasetConfig> datasets;
  DialogueOptions dialogue;
  SamplingConfig sampling;
  LlmEndpoint llm;
  std::optional<EmbeddingClientConfig> embedding;  // trigram TF-IDF when absent
  ToolConfig tools;
  std::string corsOrigin = "*";
  std::filesystem::path sessionDir = "sessions";
  std::filesystem::path cacheDir;  // empty: no index cache
};

/// Relative paths are resolved against `baseDir`.
EngineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& baseDir);
/// Throws ConfigError when the file is missing or malformed.
EngineConfig load_config(const std::filesystem::path& path);

}  // namespace ikbqa
