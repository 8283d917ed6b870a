#include "ikbqa/benchmark.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ikbqa {

using nlohmann::json;

std::vector<BenchmarkQuestion> load_questions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open question file " + path.string());
  std::vector<BenchmarkQuestion> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineNo) + ": ";
    try {
      const auto row = json::parse(line);
      BenchmarkQuestion q;
      q.id = row.at("id").get<std::string>();
      q.question = row.at("question").get<std::string>();
      q.type = parse_question_type(row.at("type").get<std::string>());
      q.goldAnswers = row.at("goldAnswers").get<std::vector<std::string>>();
      if (row.contains("goldSparql")) q.goldSparql = row["goldSparql"].get<std::string>();
      if (row.contains("script")) {
        if (row["script"].is_string()) {
          const auto scriptPath = path.parent_path() / row["script"].get<std::string>();
          std::ifstream sf(scriptPath);
          if (!sf) throw std::runtime_error("cannot open script " + scriptPath.string());
          std::stringstream buf;
          buf << sf.rdbuf();
          q.script = json::parse(buf.str());
        } else {
          q.script = row["script"];
        }
      }
      out.push_back(std::move(q));
    } catch (const json::exception& e) {
      throw std::runtime_error(where + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + e.what());
    }
  }
  return out;
}

EvalRecord score_session(const BenchmarkQuestion& q, const DialogueSession& s, const MetricOptions& options) {
  EvalRecord r;
  r.questionId = q.id;
  r.questionType = q.type;
  r.gold = q.goldAnswers;
  r.status = s.status;
  r.utterances = s.utteranceCount;
  r.interventions = s.interventions;
  r.dollars = s.cost.dollars;
  r.error = s.error;
  if (s.status != SessionStatus::Done) return r;
  r.predicted = s.answer.value_or(std::vector<std::string>{});
  const auto prf = set_f1(r.gold, r.predicted);
  r.precision = prf.precision;
  r.recall = prf.recall;
  r.f1 = prf.f1;
  r.em = exact_match(r.gold, r.predicted, options.emRule);
  r.acc = exact_set_accuracy(r.gold, r.predicted);
  r.rhits1 = rhits_at_1(r.gold, r.predicted, options.rhitsTrials, options.seed);
  r.rhits1Expected = expected_hits_at_1(r.gold, r.predicted);
  return r;
}

GroupSummary summarize(const std::string& group, const std::vector<const EvalRecord*>& records) {
  GroupSummary g;
  g.group = group;
  g.count = records.size();
  if (records.empty()) return g;
  for (const auto* r : records) {
    g.precision += r->precision;
    g.recall += r->recall;
    g.f1 += r->f1;
    g.em += r->em;
    g.rhits1 += r->rhits1;
    g.rhits1Expected += r->rhits1Expected;
    g.acc += r->acc;
    g.utterances += r->utterances;
    g.interventions += r->interventions;
    g.dollars += r->dollars;
    if (r->status == SessionStatus::Done) ++g.successes;
  }
  const double n = static_cast<double>(records.size());
  for (double* v : {&g.precision, &g.recall, &g.f1, &g.em, &g.rhits1, &g.rhits1Expected, &g.acc, &g.utterances,
                    &g.interventions, &g.dollars})
    *v /= n;
  g.successRate = static_cast<double>(g.successes) / n;
  return g;
}

BenchmarkReport build_report(std::vector<EvalRecord> records, const MetricOptions& options) {
  BenchmarkReport report;
  report.options = options;
  report.records = std::move(records);
  std::map<std::string, std::vector<const EvalRecord*>> groups;
  std::vector<const EvalRecord*> all;
  for (const auto& r : report.records) {
    groups[to_string(r.questionType)].push_back(&r);
    all.push_back(&r);
  }
  for (const auto& [name, list] : groups) report.byType.push_back(summarize(name, list));
  report.overall = summarize("overall", all);
  return report;
}

namespace {

json summary_json(const GroupSummary& g) {
  return {{"group", g.group},
          {"count", g.count},
          {"precision", g.precision},
          {"recall", g.recall},
          {"f1", g.f1},
          {"em", g.em},
          {"rhits1", g.rhits1},
          {"rhits1Expected", g.rhits1Expected},
          {"acc", g.acc},
          {"utterances", g.utterances},
          {"interventions", g.interventions},
          {"dollars", g.dollars},
          {"successes", g.successes},
          {"successRate", g.successRate}};
}

}  // namespace

json BenchmarkReport::to_json() const {
  json recs = json::array();
  for (const auto& r : records)
    recs.push_back({{"questionId", r.questionId},
                    {"questionType", to_string(r.questionType)},
                    {"gold", r.gold},
                    {"predicted", r.predicted},
                    {"precision", r.precision},
                    {"recall", r.recall},
                    {"f1", r.f1},
                    {"em", r.em},
                    {"rhits1", r.rhits1},
                    {"rhits1Expected", r.rhits1Expected},
                    {"acc", r.acc},
                    {"utterances", r.utterances},
                    {"interventions", r.interventions},
                    {"dollars", r.dollars},
                    {"status", to_string(r.status)},
                    {"error", r.error}});
  json types = json::array();
  for (const auto& g : byType) types.push_back(summary_json(g));
  return {{"emRule", options.emRule == EmRule::FirstPredicted ? "first-predicted" : "any-predicted"},
          {"rhitsTrials", options.rhitsTrials},
          {"seed", options.seed},
          {"records", recs},
          {"byType", types},
          {"overall", summary_json(overall)}};
}

std::string BenchmarkReport::table() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %5s %7s %7s %7s %7s %7s %7s %7s %7s %9s\n", "type", "n", "P", "R", "F1",
                "EM", "RHits1", "Acc", "Succ", "Utt", "Dollars");
  out += line;
  auto row = [&](const GroupSummary& g) {
    std::snprintf(line, sizeof line, "%-22s %5zu %7.4f %7.4f %7.4f %7.4f %7.4f %7.4f %7.4f %7.2f %9.4f\n",
                  g.group.c_str(), g.count, g.precision, g.recall, g.f1, g.em, g.rhits1, g.acc, g.successRate,
                  g.utterances, g.dollars);
    out += line;
  };
  for (const auto& g : byType) row(g);
  row(overall);
  return out;
}

BenchmarkReport run_benchmark(const std::vector<BenchmarkQuestion>& questions, const SessionRunner& runner,
                              const MetricOptions& options, int jobs) {
  std::vector<EvalRecord> records(questions.size());
  const long n = static_cast<long>(questions.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (long i = 0; i < n; ++i) {
    const auto& q = questions[static_cast<std::size_t>(i)];
    try {
      const DialogueSession s = runner(q);
      records[static_cast<std::size_t>(i)] = score_session(q, s, options);
    } catch (const std::exception& e) {
      EvalRecord r;
      r.questionId = q.id;
      r.questionType = q.type;
      r.gold = q.goldAnswers;
      r.status = SessionStatus::Failed;
      r.error = e.what();
      records[static_cast<std::size_t>(i)] = std::move(r);
    }
  }
  return build_report(std::move(records), options);
}

}  // namespace ikbqa
