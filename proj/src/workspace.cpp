#include "ikbqa/workspace.hpp"

#include <fstream>
#include <sstream>

#include "ikbqa/ntriples.hpp"

namespace ikbqa {

using nlohmann::json;

std::uint64_t file_fingerprint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::filesystem::path index_cache_path(const std::filesystem::path& cacheDir, const std::filesystem::path& kbPath) {
  return cacheDir / (kbPath.stem().string() + ".index.json");
}

void write_index_cache(const std::filesystem::path& out, const std::filesystem::path& kbPath,
                       const KnowledgeBase& kb, const NameIndex& index) {
  const json j = {{"kb", kbPath.string()},
                  {"fingerprint", file_fingerprint(kbPath)},
                  {"triples", kb.size()},
                  {"names", index.size()},
                  {"corpus", ranker_corpus(kb)}};
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write " + out.string());
  f << j.dump(1) << '\n';
}

std::optional<std::vector<std::string>> read_index_cache(const std::filesystem::path& cache,
                                                         const std::filesystem::path& kbPath) {
  std::ifstream in(cache);
  if (!in) return std::nullopt;
  try {
    std::stringstream buf;
    buf << in.rdbuf();
    const auto j = json::parse(buf.str());
    if (j.at("fingerprint").get<std::uint64_t>() != file_fingerprint(kbPath)) return std::nullopt;
    return j.at("corpus").get<std::vector<std::string>>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

json script_to_json(const std::vector<std::pair<std::string, std::string>>& steps) {
  json arr = json::array();
  for (const auto& [thought, action] : steps) arr.push_back({{"thought", thought}, {"action", action}});
  return arr;
}

Workspace::Workspace(EngineConfig config) : config_(std::move(config)) {}

const DatasetResources& Workspace::dataset(const std::string& name) {
  std::lock_guard lock(mutex_);
  std::string key;
  try {
    key = std::string(dataset_name(parse_dataset(name)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (auto it = loaded_.find(key); it != loaded_.end()) return *it->second;
  auto cfg = config_.datasets.find(key);
  if (cfg == config_.datasets.end()) throw ConfigError("dataset " + key + " is not configured");

  auto r = std::make_unique<DatasetResources>();
  r->config = cfg->second;
  if (!std::filesystem::exists(r->config.kbPath)) throw ConfigError("missing KB file " + r->config.kbPath.string());
  try {
    r->kb = load_ntriples(r->config.kbPath, r->config.profile);
  } catch (const std::exception& e) {
    throw ConfigError(r->config.kbPath.string() + ": " + e.what());
  }
  r->index = NameIndex(r->kb);
  if (config_.embedding) {
    r->ranker = std::make_unique<HttpEmbeddingRanker>(*config_.embedding);
  } else {
    std::optional<std::vector<std::string>> corpus;
    if (!config_.cacheDir.empty())
      corpus = read_index_cache(index_cache_path(config_.cacheDir, r->config.kbPath), r->config.kbPath);
    r->ranker = std::make_unique<TrigramTfidfRanker>(corpus ? *corpus : ranker_corpus(r->kb));
  }
  r->tools = std::make_unique<Toolbox>(r->kb, r->index, *r->ranker, config_.tools);
  r->engine = std::make_unique<DialogueEngine>(*r->tools);

  std::ifstream inst(r->config.instructionPath);
  if (!inst) throw ConfigError("missing instruction file " + r->config.instructionPath.string());
  std::stringstream buf;
  buf << inst.rdbuf();
  r->instruction = buf.str();
  while (!r->instruction.empty() && r->instruction.back() == '\n') r->instruction.pop_back();

  if (!r->config.exemplarDir.empty()) {
    try {
      r->exemplars.load_directory(r->config.exemplarDir);
    } catch (const ExemplarError& e) {
      throw ConfigError(e.what());
    }
  }
  if (!r->config.classifierPath.empty()) {
    try {
      r->classifier = std::make_unique<CentroidClassifier>(
          CentroidClassifier::train(r->config.dataset, load_labeled_questions(r->config.classifierPath)));
    } catch (const std::exception& e) {
      throw ConfigError(r->config.classifierPath.string() + ": " + e.what());
    }
    if (!r->classifier->warning().empty()) r->warnings.push_back(r->classifier->warning());
  }
  auto& slot = loaded_[key];
  slot = std::move(r);
  return *slot;
}

DialogueSession Workspace::prepare(SessionRequest req) {
  const DatasetResources& res = dataset(req.dataset);
  const QuestionType fallback = make_question_type(res.config.dataset, res.config.defaultType);
  QuestionType type = fallback;
  if (req.type) {
    type = *req.type;
  } else if (res.classifier) {
    type = res.classifier->predict(req.question);
  }
  const std::size_t shots = req.shots.value_or(res.config.shots);
  auto selection = res.exemplars.select(type, shots, &fallback);

  DialogueSession s;
  s.id = std::move(req.id);
  s.question = std::move(req.question);
  s.dataset = std::string(dataset_name(res.config.dataset));
  s.kbRef = res.config.kbPath.filename().string();
  s.questionType = type;
  s.agentSpec = std::move(req.agentSpec);
  s.prompt.instruction = res.instruction;
  s.prompt.exemplars = std::move(selection.exemplars);
  s.options = config_.dialogue;
  if (req.mode) s.options.mode = *req.mode;
  s.sink = std::move(req.sink);
  res.engine->begin(s);
  return s;
}

std::unique_ptr<Agent> Workspace::make_agent(const json& spec, ReviewMode mode, std::size_t consumed) const {
  const std::string kind = spec.is_object() ? spec.value("kind", std::string("llm")) : std::string("llm");
  if (kind == "scripted") {
    std::vector<std::pair<std::string, std::string>> steps;
    for (const auto& s : spec.at("script")) steps.emplace_back(s.value("thought", std::string()), s.at("action").get<std::string>());
    auto agent = std::make_unique<ScriptedAgent>(std::move(steps));
    for (std::size_t i = 0; i < consumed; ++i) agent->reply({});
    return agent;
  }
  if (kind == "llm") {
    if (config_.llm.baseUrl.empty()) throw ConfigError("llm.baseUrl is not configured");
    SamplingConfig sampling = config_.sampling;
    if (mode == ReviewMode::Review) sampling.n = 1;
    return std::make_unique<LlmAgent>(config_.llm, sampling);
  }
  throw ConfigError("unknown agent kind " + kind);
}

}  // namespace ikbqa
