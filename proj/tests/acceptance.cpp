// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures, so ctest reports any regression.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>

#include "fixtures.hpp"
#include "ikbqa/action.hpp"
#include "ikbqa/benchmark.hpp"
#include "ikbqa/dialogue.hpp"
#include "ikbqa/evaluator.hpp"
#include "ikbqa/metrics.hpp"
#include "ikbqa/prompt.hpp"
#include "ikbqa/transcript.hpp"
#include "metric_cases.hpp"
#include "sparql_oracle.hpp"
#include "workspace_fixtures.hpp"

using namespace ikbqa;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool ok;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const char* kAnchor = "SELECT ?e WHERE { ?e type.object.name \"Tom Hanks\"@en . }";
const char* kQuestion = "In which film did Tom Hanks play David Basner?";

PromptParts parts() {
  return {fixtures::read_file(fixtures::data_dir() / "instructions" / "freebase.txt"), {}, ""};
}

Verdict sparql_oracle() {
  const auto start = Clock::now();
  oracle::Generator gen(20240607);
  const int cases = 600;
  std::size_t maxTriples = 0, maxPatterns = 0, filters = 0;
  for (int i = 0; i < cases; ++i) {
    const auto c = gen.next();
    maxTriples = std::max(maxTriples, c.triples.size());
    maxPatterns = std::max(maxPatterns, c.query.patterns.size());
    filters += c.query.filter.has_value();
    const auto kb = KnowledgeBase::from_triples(c.triples, KbSchema::defaults(SchemaProfile::PlainRdf));
    auto table = evaluate(kb, parse_sparql(oracle::to_text(c.query)), {1u << 30, ~0ull});
    std::sort(table.rows.begin(), table.rows.end());
    if (table.rows != oracle::enumerate(c.triples, c.query))
      return {false, "case " + std::to_string(i) + " differs: " + oracle::to_text(c.query)};
  }
  const double secs = seconds_since(start);
  if (maxTriples > 200 || maxPatterns > 3) return {false, "generator exceeded the case bounds"};
  return {secs < 60, std::to_string(cases) + " cases (" + std::to_string(filters) + " with a filter, KB <= " +
                         std::to_string(maxTriples) + " triples) in " + std::to_string(secs) + " s"};
}

Verdict tom_hanks() {
  const auto& tools = *fixtures::tom_hanks().tools;
  const auto film = tools.search_graph_patterns(kAnchor, "play in film");
  const auto role = tools.search_graph_patterns(kAnchor, "character role");
  const auto nodes = fixtures::freebase_toy().tools->search_nodes("Tom Hanks");
  const std::string first = film.text.substr(0, film.text.find('\n'));
  if (first != "(?e, film.actor.film -> film.performance.film, \"Nothing in Common\")")
    return {false, "top pattern is " + first};
  if (film.text.find("(?e, film.actor.film -> film.performance.character, \"David Basner\")") == std::string::npos)
    return {false, "character path missing from the hit set"};
  const auto golden = fixtures::golden_dir();
  if (film.text != fixtures::read_file(golden / "graph_patterns_play_in_film.txt")) return {false, "play-in-film golden differs"};
  if (role.text != fixtures::read_file(golden / "graph_patterns_character_role.txt")) return {false, "character-role golden differs"};
  if (nodes.text != fixtures::read_file(golden / "search_nodes_tom_hanks.txt")) return {false, "search-nodes golden differs"};
  return {true, "film path ranked first, character path present, 3 goldens byte-identical"};
}

Verdict turn_limit() {
  DialogueEngine engine(*fixtures::tom_hanks().tools);
  const std::vector<std::string> replies = {"Action: SearchNodes(\"Tom Hanks\")", "no action at all",
                                            std::string("Action: ExecuteSPARQL('") + kAnchor + "')", "Action: Foo()"};
  const int runs = 40;
  for (int r = 0; r < runs; ++r) {
    std::size_t i = static_cast<std::size_t>(r);
    FunctionAgent agent([&](const std::vector<ChatMessage>&) { return split_reply(replies[i++ % replies.size()]); });
    auto s = engine.start("s" + std::to_string(r), kQuestion, parts(), {});
    engine.run(s, agent);
    if (s.status != SessionStatus::Exhausted || s.utteranceCount != 20 || s.history.size() != 10)
      return {false, "run " + std::to_string(r) + " ended " + std::string(to_string(s.status)) + " after " +
                         std::to_string(s.utteranceCount) + " utterances"};
  }
  return {true, std::to_string(runs) + " never-Done runs: Exhausted at 20 utterances / 10 rounds"};
}

/// Agent that records every serialized prompt it is shown.
struct RecordingAgent : Agent {
  ScriptedAgent inner;
  std::vector<std::string> prompts;
  explicit RecordingAgent(std::vector<std::pair<std::string, std::string>> steps) : inner(std::move(steps)) {}
  AgentReply reply(const std::vector<ChatMessage>& prompt) override {
    prompts.push_back(flatten_prompt(prompt));
    return inner.reply(prompt);
  }
  std::string identity() const override { return "recording"; }
};

Verdict correction() {
  DialogueEngine engine(*fixtures::tom_hanks().tools);
  const std::string original = "SearchNodes(\"Tomm Hanx\")";
  const std::string revised = std::string("SearchGraphPatterns('") + kAnchor + "', semantic=\"play in film\")";
  const std::size_t correctedTurn = 1;
  RecordingAgent agent({{"", "SearchNodes(\"Tom Hanks\")"},
                        {"", original},
                        {"", "SearchNodes(\"Nothing in Common\")"},
                        {"", "SearchNodes(\"David Basner\")"},
                        {"", "Done"}});
  DialogueOptions opts;
  opts.mode = ReviewMode::Review;
  fixtures::TempDir dir;
  TranscriptWriter writer(dir / "t.jsonl");
  auto s = engine.start("s1", kQuestion, parts(), opts, writer.sink());
  while (!s.terminal()) {
    engine.propose(s, agent);
    if (s.status != SessionStatus::AwaitingReview) break;
    if (s.history.size() == correctedTurn) engine.revise(s, "use the film path", revised);
    else engine.accept(s);
  }
  s.sink = {};
  if (agent.prompts.size() != 5) return {false, "expected 5 prompts, saw " + std::to_string(agent.prompts.size())};
  for (std::size_t i = correctedTurn + 1; i < agent.prompts.size(); ++i) {
    if (agent.prompts[i].find(original) != std::string::npos) return {false, "prompt " + std::to_string(i) + " has a_T"};
    if (agent.prompts[i].find(revised) == std::string::npos) return {false, "prompt " + std::to_string(i) + " lacks a'_T"};
  }
  // The same holds for prompts rebuilt from the stored transcript, which
  // itself still records the original proposal.
  const auto reloaded = load_transcript(dir / "t.jsonl");
  const auto rebuilt = flatten_prompt(engine.prompt_messages(reloaded));
  if (rebuilt.find(original) != std::string::npos || rebuilt.find(revised) == std::string::npos)
    return {false, "prompt rebuilt from the transcript is wrong"};
  if (fixtures::read_file(dir / "t.jsonl").find("Tomm Hanx") == std::string::npos)
    return {false, "transcript lost the original action"};
  return {true, "corrected turn 1; 3 later prompts carry a'_T and never a_T"};
}

Verdict metrics() {
  for (std::size_t i = 0; i < fixtures::kMetricCases.size(); ++i) {
    const auto& c = fixtures::kMetricCases[i];
    const auto s = set_f1(c.gold, c.predicted);
    if (s.precision != c.precision || s.recall != c.recall || s.f1 != c.f1 ||
        exact_set_accuracy(c.gold, c.predicted) != c.acc || exact_match(c.gold, c.predicted) != c.em)
      return {false, "fixture " + std::to_string(i) + " differs"};
  }
  double worst = 0;
  for (const auto& [gold, pred] : fixtures::kRhitsCases) {
    const double expected = static_cast<double>(std::count_if(pred.begin(), pred.end(), [&](const std::string& p) {
                              return std::find(gold.begin(), gold.end(), p) != gold.end();
                            })) /
                            static_cast<double>(pred.size());
    worst = std::max(worst, std::fabs(rhits_at_1(gold, pred, 10000, 42) - expected));
  }
  return {worst <= 0.02, std::to_string(fixtures::kMetricCases.size()) + " fixtures exact; Hits@1 worst deviation " +
                             std::to_string(worst) + " over " + std::to_string(fixtures::kRhitsCases.size()) + " fixtures"};
}

Verdict end_to_end() {
  fixtures::TempDir dir;
  Workspace ws(fixtures::test_config(dir.path()));
  const auto qs = fixtures::toy_questions();
  const auto start = Clock::now();
  const auto report = run_benchmark(qs, fixtures::scripted_runner(ws), {}, 1);
  const double secs = seconds_since(start);
  std::string covered;
  auto has = [&](const std::function<bool(const BenchmarkQuestion&)>& pred, const char* name) {
    if (std::any_of(qs.begin(), qs.end(), pred)) return true;
    covered += std::string(" missing ") + name;
    return false;
  };
  auto script_has = [](const BenchmarkQuestion& q, const char* needle) { return q.script.dump().find(needle) != std::string::npos; };
  bool archetypes = true;
  for (const auto& label : labels_for(Dataset::CWQ))
    archetypes &= has([&](const BenchmarkQuestion& q) { return q.type.label == label; }, label.c_str());
  archetypes &= has([&](const BenchmarkQuestion& q) { return script_has(q, "COUNT("); }, "count");
  archetypes &= has([&](const BenchmarkQuestion& q) { return script_has(q, "ORDER BY"); }, "superlative-order");
  archetypes &= has([&](const BenchmarkQuestion& q) { return script_has(q, "pq."); }, "qualifier");
  const bool ok = qs.size() == 12 && archetypes && report.overall.f1 == 1.0 && report.overall.successes == 12 && secs < 10;
  return {ok, "F1 " + std::to_string(report.overall.f1) + ", success " + std::to_string(report.overall.successes) + "/" +
                  std::to_string(report.overall.count) + " in " + std::to_string(secs) + " s" + covered};
}

Verdict cost() {
  std::mt19937_64 rng(11);
  DialogueEngine engine(*fixtures::tom_hanks().tools);
  double worst = 0;
  for (int d = 0; d < 200; ++d) {
    std::vector<TokenUsage> usage(1 + rng() % 10);
    long long in = 0, out = 0;
    for (auto& u : usage) {
      u = {static_cast<int>(rng() % 20000), static_cast<int>(rng() % 2000)};
      in += u.prompt;
      out += u.completion;
    }
    std::size_t i = 0;
    FunctionAgent agent([&](const std::vector<ChatMessage>&) {
      auto r = split_reply(i + 1 < usage.size() ? "Action: SearchNodes(\"Tom Hanks\")" : "Action: Done");
      r.usage = usage[i++];
      return r;
    });
    auto s = engine.start("c", kQuestion, parts(), {});
    engine.run(s, agent);
    const double expected = static_cast<double>(in) / 1000.0 * 0.01 + static_cast<double>(out) / 1000.0 * 0.03;
    worst = std::max(worst, std::fabs(s.cost.dollars - expected));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", worst);
  return {worst <= 1e-9, std::string("200 synthetic dialogues, worst error ") + buf};
}

std::string random_arg(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {"a", " ", "\"", "'", "\\", "\n", "\t", "é", "東京", "🎬", "'''", "\"\"\"",
                                                  ")", "(", ",", "=", "?e", "{ ?e type.object.name \"Tom Hanks\"@en . }"};
  std::string s;
  const int n = rng() % 12;
  for (int i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

Verdict action_round_trip() {
  std::mt19937_64 rng(2024);
  const int cases = 1000;
  for (int i = 0; i < cases; ++i) {
    Action a;
    switch (i % 4) {
      case 0: a = Action::search_nodes(random_arg(rng)); break;
      case 1: a = Action::search_graph_patterns(random_arg(rng), random_arg(rng)); break;
      case 2: a = Action::execute_sparql(random_arg(rng)); break;
      default: a = Action::done(); break;
    }
    const auto text = serialize_action(a);
    const auto r = parse_action(text);
    if (!r.ok() || !(*r.action == a)) return {false, "case " + std::to_string(i) + ": " + text};
  }
  return {true, std::to_string(cases) + " serializations parsed back identically"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"sparql-oracle-equivalence", sparql_oracle},  {"tom-hanks-micro-reproduction", tom_hanks},
      {"turn-limit-contract", turn_limit},           {"correction-semantics", correction},
      {"metric-correctness", metrics},               {"golden-end-to-end-replay", end_to_end},
      {"cost-accounting", cost},                     {"action-parser-round-trip", action_round_trip},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failures += !v.ok;
    std::cout << (v.ok ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  return failures;
}
