#pragma once

#include "fixtures.hpp"
#include "ikbqa/benchmark.hpp"
#include "ikbqa/config.hpp"
#include "ikbqa/workspace.hpp"

namespace fixtures {

/// The shipped config with sessions redirected and index caching off.
inline ikbqa::EngineConfig test_config(const std::filesystem::path& sessions) {
  auto cfg = ikbqa::load_config(data_dir() / "config" / "default.json");
  cfg.sessionDir = sessions;
  cfg.cacheDir.clear();
  return cfg;
}

inline ikbqa::SessionRunner scripted_runner(ikbqa::Workspace& ws) {
  return [&ws](const ikbqa::BenchmarkQuestion& q) {
    ikbqa::SessionRequest req;
    req.id = q.id;
    req.question = q.question;
    req.dataset = std::string(ikbqa::dataset_name(q.type.dataset));
    req.mode = ikbqa::ReviewMode::Auto;
    req.agentSpec = {{"kind", "scripted"}, {"script", q.script}};
    auto agent = ws.make_agent(req.agentSpec, ikbqa::ReviewMode::Auto);
    ikbqa::DialogueSession s = ws.prepare(std::move(req));
    ws.dataset(s.dataset).engine->run(s, *agent);
    return s;
  };
}

inline std::vector<ikbqa::BenchmarkQuestion> toy_questions() {
  return ikbqa::load_questions(data_dir() / "questions" / "toy12.jsonl");
}

}  // namespace fixtures
