// Operator entry point: index, run, replay, eval, serve.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "CLI11.hpp"
#include "ikbqa/benchmark.hpp"
#include "ikbqa/ntriples.hpp"
#include "ikbqa/service.hpp"
#include "ikbqa/transcript.hpp"
#include "ikbqa/workspace.hpp"

using namespace ikbqa;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kDrift = 1, kUsage = 2, kBackend = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config = "data/config/default.json";
  int verbose = 0;
};

EngineConfig read_config(const Globals& g) {
  try {
    return load_config(g.config);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

void log(const Globals& g, const std::string& msg) {
  if (g.verbose > 0) std::cerr << msg << '\n';
}

const DatasetResources& load_dataset(Workspace& ws, const std::string& name, const Globals& g) {
  try {
    const auto& r = ws.dataset(name);
    for (const auto& w : r.warnings) log(g, "warning: " + w);
    log(g, "loaded " + std::to_string(r.kb.size()) + " triples from " + r.config.kbPath.string());
    return r;
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

std::optional<std::size_t> parse_shots(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "all") return kAllShots;
  try {
    return static_cast<std::size_t>(std::stoul(text));
  } catch (const std::exception&) {
    throw UsageError("--shots must be a number or \"all\"");
  }
}

json agent_spec(const std::string& agent) {
  if (agent == "llm") return {{"kind", "llm"}};
  if (agent.rfind("scripted:", 0) == 0) {
    try {
      return {{"kind", "scripted"}, {"script", script_to_json(load_script(agent.substr(9)))}};
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("--agent must be scripted:<file> or llm");
}

std::string random_id() {
  std::random_device rd;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%08x%08x", rd(), rd());
  return std::string("cli") + std::string(buf, 12);
}

void print_session(const DialogueSession& s) {
  for (const auto& t : s.history) {
    std::cout << "Thought: " << t.thought << '\n';
    std::cout << "Action: " << t.actionText << (t.corrected ? "  [corrected]" : "") << '\n';
    std::cout << "Observation: " << t.observation.text << "\n\n";
  }
  if (s.status == SessionStatus::Done) {
    std::cout << "Thought: " << s.finalThought << "\nAction: Done\n\n";
    std::cout << "Answer: " << json(s.answer.value_or(std::vector<std::string>{})).dump() << '\n';
  }
  std::cout << "Status: " << to_string(s.status) << "  utterances: " << s.utteranceCount
            << "  dollars: " << s.cost.dollars << '\n';
  if (!s.error.empty()) std::cout << "Error: " << s.error << '\n';
}

Exemplar to_exemplar(const DialogueSession& s, const QuestionType& type) {
  Exemplar e{type, s.question, {}};
  for (const auto& t : s.history) e.turns.push_back({t.thought, t.actionText, t.observation.text});
  e.turns.push_back({s.finalThought, "Done", ""});
  return e;
}

struct RunCommand {
  std::string question;
  std::string dataset;
  std::string mode;
  std::string agent = "llm";
  std::string transcript;
  std::string shots;
  std::string type;
  std::string exemplarOut;
  int maxTurns = 0;
};

int cmd_run(const Globals& g, const RunCommand& o) {
  EngineConfig cfg = read_config(g);
  if (o.maxTurns > 0) cfg.dialogue.maxTurns = o.maxTurns;
  Workspace ws(std::move(cfg));
  const auto& res = load_dataset(ws, o.dataset, g);

  SessionRequest req;
  req.id = random_id();
  req.question = o.question;
  req.dataset = o.dataset;
  try {
    if (!o.mode.empty()) req.mode = parse_review_mode(o.mode);
    if (!o.type.empty()) req.type = make_question_type(res.config.dataset, o.type);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  req.shots = parse_shots(o.shots);
  req.agentSpec = agent_spec(o.agent);

  std::unique_ptr<TranscriptWriter> writer;
  if (!o.transcript.empty()) {
    writer = std::make_unique<TranscriptWriter>(o.transcript);
    req.sink = writer->sink();
  }
  std::unique_ptr<Agent> agent;
  try {
    agent = ws.make_agent(req.agentSpec, req.mode.value_or(ws.config().dialogue.mode));
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  DialogueSession s = ws.prepare(std::move(req));
  log(g, "question type " + to_string(*s.questionType) + ", " + std::to_string(s.prompt.exemplars.size()) +
             " exemplars");
  while (!s.terminal()) {
    res.engine->run(s, *agent);
    // No reviewer on a terminal: review mode accepts every proposal as made.
    if (s.status == SessionStatus::AwaitingReview) res.engine->accept(s);
  }
  print_session(s);

  if (!o.exemplarOut.empty()) {
    if (s.status != SessionStatus::Done) {
      std::cerr << "not writing an exemplar: session ended " << to_string(s.status) << '\n';
      return kBackend;
    }
    std::vector<Exemplar> all;
    if (std::filesystem::exists(o.exemplarOut)) all = load_exemplar_file(o.exemplarOut);
    all.push_back(to_exemplar(s, *s.questionType));
    write_exemplar_file(o.exemplarOut, all);
  }
  return s.status == SessionStatus::Failed ? kBackend : kOk;
}

Observation replay_one(const DialogueEngine& engine, const std::string& actionText) {
  const auto parsed = parse_action(actionText);
  if (!parsed.ok()) return Observation::error(parsed.error);
  return engine.execute(*parsed.action);
}

int report_drift(const std::string& where, const std::string& expected, const std::string& actual) {
  std::cout << "drift at " << where << "\n--- recorded\n" << expected << "\n+++ replayed\n" << actual << '\n';
  return 1;
}

int cmd_replay(const Globals& g, const std::string& path, const std::string& datasetOverride) {
  std::vector<json> events;
  try {
    events = read_jsonl(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (events.empty()) throw UsageError(path + " is empty");
  Workspace ws(read_config(g));
  int drifts = 0;
  std::size_t checked = 0;

  if (events.front().value("type", "") == "questionType") {
    const std::string dataset = datasetOverride.empty() ? events.front().at("dataset").get<std::string>()
                                                        : datasetOverride;
    const auto& res = load_dataset(ws, dataset, g);
    const auto exemplars = load_exemplar_file(path);
    for (std::size_t i = 0; i < exemplars.size(); ++i) {
      for (std::size_t t = 0; t < exemplars[i].turns.size(); ++t) {
        const auto& turn = exemplars[i].turns[t];
        if (turn.actionText == "Done") continue;
        const auto obs = replay_one(*res.engine, turn.actionText);
        ++checked;
        if (obs.text != turn.observationText)
          drifts += report_drift("exemplar " + std::to_string(i) + " turn " + std::to_string(t),
                                 turn.observationText, obs.text);
      }
    }
  } else {
    DialogueSession s;
    try {
      s = session_from_events(events);
    } catch (const std::exception& e) {
      throw UsageError(path + ": " + e.what());
    }
    const auto& res = load_dataset(ws, datasetOverride.empty() ? s.dataset : datasetOverride, g);
    for (const auto& turn : s.history) {
      const auto obs = replay_one(*res.engine, turn.actionText);
      ++checked;
      if (obs.text != turn.observation.text)
        drifts += report_drift("turn " + std::to_string(turn.index), turn.observation.text, obs.text);
    }
  }
  std::cout << checked << " observations checked, " << drifts << " drifts\n";
  return drifts == 0 ? kOk : kDrift;
}

struct EvalCommand {
  std::string questions;
  std::string out;
  std::string agent = "scripted";
  std::string emRule = "first";
  std::string mode;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  int maxTurns = 0;
};

int cmd_eval(const Globals& g, const EvalCommand& o) {
  EngineConfig cfg = read_config(g);
  if (o.maxTurns > 0) cfg.dialogue.maxTurns = o.maxTurns;
  if (!o.mode.empty()) {
    if (o.mode != "auto") throw UsageError("eval runs unattended; --mode must be auto");
  }
  Workspace ws(std::move(cfg));
  std::vector<BenchmarkQuestion> questions;
  try {
    questions = load_questions(o.questions);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (o.agent != "scripted" && o.agent != "llm") throw UsageError("--agent must be scripted or llm");
  std::set<std::string> datasets;
  for (const auto& q : questions) {
    if (datasets.insert(std::string(dataset_name(q.type.dataset))).second)
      load_dataset(ws, std::string(dataset_name(q.type.dataset)), g);
    if (o.agent == "scripted" && q.script.is_null()) throw UsageError("question " + q.id + " has no script");
  }

  MetricOptions metrics;
  metrics.seed = o.seed;
  metrics.rhitsTrials = o.trials;
  if (o.emRule == "first") metrics.emRule = EmRule::FirstPredicted;
  else if (o.emRule == "any") metrics.emRule = EmRule::AnyPredicted;
  else throw UsageError("--em-rule must be first or any");

  const std::filesystem::path out(o.out);
  std::filesystem::create_directories(out / "transcripts");
  const SessionRunner runner = [&](const BenchmarkQuestion& q) {
    SessionRequest req;
    req.id = q.id;
    req.question = q.question;
    req.dataset = std::string(dataset_name(q.type.dataset));
    req.mode = ReviewMode::Auto;
    req.agentSpec = o.agent == "llm" ? json{{"kind", "llm"}} : json{{"kind", "scripted"}, {"script", q.script}};
    TranscriptWriter writer(out / "transcripts" / (q.id + ".jsonl"));
    req.sink = writer.sink();
    auto agent = ws.make_agent(req.agentSpec, ReviewMode::Auto);
    DialogueSession s = ws.prepare(std::move(req));
    ws.dataset(s.dataset).engine->run(s, *agent);
    s.sink = {};
    return s;
  };
  const auto report = run_benchmark(questions, runner, metrics, o.jobs);

  std::ofstream(out / "report.json") << report.to_json().dump(2) << '\n';
  std::ofstream(out / "report.txt") << report.table();
  if (g.verbose > 0) std::cout << report.table();
  char line[160];
  std::snprintf(line, sizeof line, "overall F1 %.4f  success %zu/%zu  utterances %.2f  dollars %.4f\n",
                report.overall.f1, report.overall.successes, report.overall.count, report.overall.utterances,
                report.overall.dollars);
  std::cout << line;
  for (const auto& r : report.records)
    if (!r.error.empty()) log(g, r.questionId + ": " + r.error);
  return kOk;
}

int cmd_index(const Globals& g, const std::string& kbPath, const std::string& profile, std::string outPath) {
  if (!std::filesystem::exists(kbPath)) throw UsageError("missing KB file " + kbPath);
  SchemaProfile p;
  try {
    p = parse_profile(profile);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  KnowledgeBase kb;
  try {
    kb = load_ntriples(kbPath, p);
  } catch (const std::exception& e) {
    throw UsageError(kbPath + ": " + e.what());
  }
  const NameIndex index(kb);
  if (outPath.empty()) {
    std::filesystem::path cacheDir = std::filesystem::path(kbPath).parent_path();
    if (std::filesystem::exists(g.config)) {
      const auto cfg = read_config(g);
      if (!cfg.cacheDir.empty()) cacheDir = cfg.cacheDir;
    }
    outPath = index_cache_path(cacheDir, kbPath).string();
  }
  write_index_cache(outPath, kbPath, kb, index);
  std::cout << "indexed " << kb.size() << " triples, " << index.size() << " names -> " << outPath << '\n';
  return kOk;
}

int cmd_serve(const Globals& g, const std::string& host, int port) {
  Workspace ws(read_config(g));
  Service service(ws);
  log(g, "restored " + std::to_string(service.rehydrated()) + " sessions");
  std::cout << "listening on " << host << ":" << port << std::endl;
  if (!service.listen(host, port)) {
    std::cerr << "cannot bind " << host << ":" << port << '\n';
    return kBackend;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive KBQA engine"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "engine config JSON");
  app.add_flag("-v,--verbose", g.verbose, "log progress to stderr");

  auto* index = app.add_subcommand("index", "build and cache the name index and ranker corpus");
  std::string kbPath, profile = "freebase", indexOut;
  index->add_option("--kb", kbPath, "N-Triples file")->required();
  index->add_option("--profile", profile, "freebase | wikidata | plain");
  index->add_option("--out", indexOut, "cache file (default <cacheDir>/<kb>.index.json)");

  auto* run = app.add_subcommand("run", "run one dialogue");
  RunCommand ro;
  run->add_option("--question", ro.question)->required();
  run->add_option("--dataset", ro.dataset)->required();
  run->add_option("--mode", ro.mode, "auto | review (review accepts every proposal)");
  run->add_option("--agent", ro.agent, "scripted:<file> | llm");
  run->add_option("--transcript", ro.transcript, "write the transcript JSONL here");
  run->add_option("--shots", ro.shots, "exemplars in the prompt, or \"all\"");
  run->add_option("--type", ro.type, "question type label, skipping the classifier");
  run->add_option("--max-turns", ro.maxTurns);
  run->add_option("--exemplar-out", ro.exemplarOut, "append the finished dialogue to an exemplar file");

  auto* replay = app.add_subcommand("replay", "re-execute recorded actions and diff observations");
  std::string replayPath, replayDataset;
  replay->add_option("--transcript", replayPath, "session transcript or exemplar file")->required();
  replay->add_option("--dataset", replayDataset, "override the recorded dataset");

  auto* eval = app.add_subcommand("eval", "benchmark over a question file");
  EvalCommand eo;
  eval->add_option("--questions", eo.questions)->required();
  eval->add_option("--out", eo.out)->required();
  eval->add_option("--agent", eo.agent, "scripted | llm");
  eval->add_option("--jobs", eo.jobs)->check(CLI::PositiveNumber);
  eval->add_option("--seed", eo.seed);
  eval->add_option("--trials", eo.trials)->check(CLI::PositiveNumber);
  eval->add_option("--em-rule", eo.emRule, "first | any");
  eval->add_option("--mode", eo.mode);
  eval->add_option("--max-turns", eo.maxTurns);

  auto* serve = app.add_subcommand("serve", "HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host);
  serve->add_option("--port", port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*index) return cmd_index(g, kbPath, profile, indexOut);
    if (*run) return cmd_run(g, ro);
    if (*replay) return cmd_replay(g, replayPath, replayDataset);
    if (*eval) return cmd_eval(g, eo);
    if (*serve) return cmd_serve(g, host, port);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBackend;
  }
  return kUsage;
}
