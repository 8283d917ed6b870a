#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ikbqa/config.hpp"
#include "ikbqa/service.hpp"
#include "ikbqa/sparql_client.hpp"
#include "ikbqa/transcript.hpp"

using namespace ikbqa;
using nlohmann::json;

namespace {

EngineConfig test_config(const std::filesystem::path& sessions) {
  auto cfg = load_config(fixtures::data_dir() / "config" / "default.json");
  cfg.sessionDir = sessions;
  cfg.cacheDir.clear();
  return cfg;
}

const char* kTomHanksAnchor = "SELECT ?e WHERE { ?e type.object.name \"Tom Hanks\"@en . }";

std::string graph_patterns_call(const char* semantic) {
  return std::string("SearchGraphPatterns('") + kTomHanksAnchor + "', semantic=\"" + semantic + "\")";
}

json tom_hanks_script() { return json::parse(fixtures::read_file(fixtures::data_dir() / "demo" / "tom_hanks.json")); }

/// A Service over its own workspace, serving from a thread.
class Running {
 public:
  explicit Running(const std::filesystem::path& sessions) : Running(test_config(sessions)) {}
  explicit Running(EngineConfig cfg) : ws_(std::move(cfg)), service_(ws_) {
    port_ = service_.bind_any_port("127.0.0.1");
    thread_ = std::thread([this] { service_.run(); });
    service_.wait_until_ready();
  }
  ~Running() {
    service_.stop();
    if (thread_.joinable()) thread_.join();
  }
  Service& service() { return service_; }
  Workspace& workspace() { return ws_; }
  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  Workspace ws_;
  Service service_;
  int port_ = -1;
  std::thread thread_;
};

struct Reply {
  int status = 0;
  json body;
  std::string raw;
};

Reply post(httplib::Client& c, const std::string& path, const json& body = json::object()) {
  auto r = c.Post(path, body.dump(), "application/json");
  if (!r) return {};
  Reply out{r->status, json(), r->body};
  out.body = json::parse(r->body, nullptr, false);
  return out;
}

Reply get(httplib::Client& c, const std::string& path) {
  auto r = c.Get(path);
  if (!r) return {};
  Reply out{r->status, json(), r->body};
  out.body = json::parse(r->body, nullptr, false);
  return out;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

json review_session(httplib::Client& c, const json& script) {
  const auto r = post(c, "/sessions",
                      {{"question", "what movies did tom hanks play in with the role of david basner"},
                       {"dataset", "CWQ"},
                       {"mode", "review"},
                       {"type", "CWQ/Conjunction"},
                       {"script", script}});
  EXPECT_EQ(r.status, 201) << r.raw;
  return r.body;
}

}  // namespace

TEST(Service, HealthAndEmptyListing) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const auto h = get(c, "/health");
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(h.body, json({{"ok", true}}));
  const auto l = get(c, "/sessions");
  EXPECT_EQ(l.status, 200);
  EXPECT_EQ(l.body["sessions"], json::array());
}

TEST(Service, CreateListAndGet) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const auto r = post(c, "/sessions", {{"question", "Which film has the most awards?"}, {"dataset", "CWQ"}, {"shots", 1}});
  ASSERT_EQ(r.status, 201) << r.raw;
  const std::string id = r.body["id"];
  EXPECT_EQ(r.body["status"], "Running");
  EXPECT_EQ(r.body["mode"], "auto");
  EXPECT_EQ(r.body["questionType"], "CWQ/Superlative");
  EXPECT_EQ(r.body["exemplars"], 1);
  EXPECT_TRUE(r.body["pendingProposal"].is_null());
  EXPECT_EQ(r.body["metrics"]["utterances"], 0);
  EXPECT_TRUE(std::filesystem::exists(dir / (id + ".jsonl")));

  const auto list = get(c, "/sessions");
  ASSERT_EQ(list.body["sessions"].size(), 1u);
  EXPECT_EQ(list.body["sessions"][0]["id"], id);
  const auto one = get(c, "/sessions/" + id);
  EXPECT_EQ(one.status, 200);
  EXPECT_EQ(one.body, r.body);
  EXPECT_EQ(s.service().session_count(), 1u);
}

TEST(Service, BadRequests) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  EXPECT_EQ(post(c, "/sessions", {{"dataset", "CWQ"}}).status, 400);
  EXPECT_EQ(post(c, "/sessions", {{"question", "q"}, {"dataset", "Nope"}}).status, 400);
  EXPECT_EQ(post(c, "/sessions", {{"question", "q"}, {"dataset", "CWQ"}, {"mode", "sometimes"}}).status, 400);
  EXPECT_EQ(post(c, "/sessions", {{"question", "q"}, {"dataset", "CWQ"}, {"script", "x"}}).status, 400);
  auto raw = c.Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(raw);
  EXPECT_EQ(raw->status, 400);
  EXPECT_EQ(s.service().session_count(), 0u);
  // A rejected create leaves no transcript behind.
  EXPECT_TRUE(std::filesystem::is_empty(dir.path()));
}

TEST(Service, UnknownSessionIs404) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  EXPECT_EQ(get(c, "/sessions/nope").status, 404);
  EXPECT_EQ(post(c, "/sessions/nope/propose").status, 404);
  EXPECT_EQ(post(c, "/sessions/nope/accept").status, 404);
  EXPECT_EQ(post(c, "/sessions/nope/revise", {{"actionText", "Done"}}).status, 404);
  EXPECT_EQ(get(c, "/sessions/nope/transcript").status, 404);
}

TEST(Service, AcceptOnlyPathReachesDone) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string id = review_session(c, tom_hanks_script())["id"];
  const std::string base = "/sessions/" + id;
  std::size_t lines = line_count(get(c, base + "/transcript").raw);
  EXPECT_EQ(lines, 1u);  // the prompt event
  for (int i = 0; i < 5; ++i) {
    const auto p = post(c, base + "/propose");
    ASSERT_EQ(p.status, 200) << p.raw;
    EXPECT_EQ(p.body["status"], "AwaitingReview");
    EXPECT_FALSE(p.body["pendingProposal"].is_null());
    EXPECT_EQ(line_count(get(c, base + "/transcript").raw), ++lines);
    const auto a = post(c, base + "/accept");
    ASSERT_EQ(a.status, 200) << a.raw;
    EXPECT_TRUE(a.body["pendingProposal"].is_null());
    EXPECT_EQ(line_count(get(c, base + "/transcript").raw), ++lines);
  }
  const auto done = get(c, base);
  EXPECT_EQ(done.body["status"], "Done");
  EXPECT_EQ(done.body["answer"], json::array({"Nothing in Common"}));
  EXPECT_EQ(done.body["metrics"]["interventions"], 0);
  EXPECT_EQ(done.body["metrics"]["utterances"], 9);
  EXPECT_EQ(done.body["turns"].size(), 4u);
  for (const auto& t : done.body["turns"]) EXPECT_FALSE(t["corrected"].get<bool>());
}

TEST(Service, RepeatedAcceptIsRejected) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string base = "/sessions/" + review_session(c, tom_hanks_script())["id"].get<std::string>();
  const auto first = post(c, base + "/accept");
  EXPECT_EQ(first.status, 409);  // nothing proposed yet
  ASSERT_EQ(post(c, base + "/propose").status, 200);
  EXPECT_EQ(post(c, base + "/propose").status, 409);  // already awaiting review
  EXPECT_EQ(post(c, base + "/accept").status, 200);
  const auto again = post(c, base + "/accept");
  EXPECT_EQ(again.status, 409);
  EXPECT_NE(again.body["error"].get<std::string>().find("nothing to accept"), std::string::npos);
  const auto view = get(c, base);
  EXPECT_EQ(view.body["turns"].size(), 1u);
  EXPECT_EQ(view.body["metrics"]["utterances"], 2);
  EXPECT_EQ(post(c, base + "/revise", {{"actionText", "Done"}}).status, 409);
}

TEST(Service, GetRoutesDoNotMutate) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string base = "/sessions/" + review_session(c, tom_hanks_script())["id"].get<std::string>();
  ASSERT_EQ(post(c, base + "/propose").status, 200);
  const auto before = get(c, base);
  const auto transcript = get(c, base + "/transcript").raw;
  for (int i = 0; i < 5; ++i) {
    get(c, "/sessions");
    get(c, base + "/transcript");
    EXPECT_EQ(get(c, base).body, before.body);
  }
  EXPECT_EQ(get(c, base + "/transcript").raw, transcript);
}

TEST(Service, ReviseWithCompoundCall) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  // The scripted agent wanders off; the annotator steers it to the CVT path.
  const json script = json::array({{{"thought", "Search the name."}, {"action", "SearchNodes(\"Tom Hanks\")"}},
                                   {{"thought", "Guess."}, {"action", "SearchNodes(\"Nothing\")"}}});
  const std::string base = "/sessions/" + review_session(c, script)["id"].get<std::string>();
  ASSERT_EQ(post(c, base + "/propose").status, 200);
  ASSERT_EQ(post(c, base + "/accept").status, 200);
  const auto p = post(c, base + "/propose");
  EXPECT_EQ(p.body["pendingProposal"]["actionText"], "SearchNodes(\"Nothing\")");
  const auto r = post(c, base + "/revise",
                      {{"thought", "Look for the films he played in."}, {"actionText", graph_patterns_call("play in film")}});
  ASSERT_EQ(r.status, 200) << r.raw;
  EXPECT_EQ(r.body["status"], "Running");
  EXPECT_EQ(r.body["metrics"]["interventions"], 1);
  const auto& turn = r.body["turns"][1];
  EXPECT_TRUE(turn["corrected"].get<bool>());
  EXPECT_EQ(turn["correctionOf"]["actionText"], "SearchNodes(\"Nothing\")");
  EXPECT_EQ(turn["observation"]["text"],
            fixtures::freebase_toy().tools->search_graph_patterns(kTomHanksAnchor, "play in film").text);
  EXPECT_NE(turn["observation"]["text"].get<std::string>().find("film.actor.film -> film.performance.film"),
            std::string::npos);
  const auto events = read_jsonl(dir / (r.body["id"].get<std::string>() + ".jsonl"));
  ASSERT_EQ(events.size(), 5u);  // prompt, proposal, turn, proposal, correction
  EXPECT_EQ(events.back()["type"], "correction");
}

TEST(Service, MalformedRevisionIs422) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string base = "/sessions/" + review_session(c, tom_hanks_script())["id"].get<std::string>();
  ASSERT_EQ(post(c, base + "/propose").status, 200);
  const auto before = get(c, base);
  const auto transcript = get(c, base + "/transcript").raw;
  const auto r = post(c, base + "/revise", {{"thought", "x"}, {"actionText", "Foo("}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "malformed string literal at offset 4");
  EXPECT_EQ(get(c, base).body, before.body);
  EXPECT_EQ(get(c, base + "/transcript").raw, transcript);
  EXPECT_EQ(post(c, base + "/revise", {{"thought", "x"}}).status, 400);
}

TEST(Service, AutoRunAndRunConflict) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const auto created = post(c, "/sessions",
                            {{"question", "q"}, {"dataset", "CWQ"}, {"mode", "auto"}, {"script", tom_hanks_script()}});
  const std::string base = "/sessions/" + created.body["id"].get<std::string>();
  const auto r = post(c, base + "/run");
  ASSERT_EQ(r.status, 200) << r.raw;
  EXPECT_EQ(r.body["status"], "Done");
  EXPECT_EQ(r.body["answer"], json::array({"Nothing in Common"}));
  EXPECT_EQ(post(c, base + "/run").status, 409);
  EXPECT_EQ(post(c, base + "/propose").status, 409);
}

TEST(Service, NoAgentIs503) {
  fixtures::TempDir dir;
  std::string id;
  {
    Running s(dir.path());
    auto c = s.client();
    const auto created = post(c, "/sessions", {{"question", "q"}, {"dataset", "CWQ"}, {"mode", "review"}});
    ASSERT_EQ(created.status, 201) << created.raw;
    id = created.body["id"];
  }
  // Restarted without an LLM endpoint: the session is browsable but has no agent.
  auto cfg = test_config(dir.path());
  cfg.llm.baseUrl.clear();
  Running s(std::move(cfg));
  auto c = s.client();
  EXPECT_EQ(get(c, "/sessions/" + id).status, 200);
  const auto r = post(c, "/sessions/" + id + "/propose");
  EXPECT_EQ(r.status, 503) << r.raw;
  EXPECT_NE(r.body["error"].get<std::string>().find("llm.baseUrl"), std::string::npos);
  EXPECT_EQ(post(c, "/sessions", {{"question", "q"}, {"dataset", "CWQ"}}).status, 400);
}

TEST(Service, TranscriptDownload) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string id = review_session(c, tom_hanks_script())["id"];
  ASSERT_EQ(post(c, "/sessions/" + id + "/propose").status, 200);
  auto r = c.Get("/sessions/" + id + "/transcript");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "application/x-ndjson");
  EXPECT_NE(r->get_header_value("Content-Disposition").find(id + ".jsonl"), std::string::npos);
  EXPECT_EQ(r->body, fixtures::read_file(dir / (id + ".jsonl")));
  std::istringstream lines(r->body);
  std::string line;
  while (std::getline(lines, line)) EXPECT_NO_THROW(json::parse(line));
}

TEST(Service, ToolProbesMatchGoldens) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  // CWQ is served from the larger toy slice; compare with a toolbox over that file.
  const auto& tools = *fixtures::freebase_toy().tools;
  const auto nodes = post(c, "/tools/search-nodes", {{"kb", "CWQ"}, {"args", {{"name", "Tom Hanks"}}}});
  ASSERT_EQ(nodes.status, 200) << nodes.raw;
  EXPECT_EQ(nodes.body, to_json(tools.search_nodes("Tom Hanks")));
  EXPECT_EQ(nodes.body["kind"], "NodeList");

  const auto patterns = post(c, "/tools/search-graph-patterns",
                             {{"kb", "CWQ"}, {"args", {{"sparql", kTomHanksAnchor}, {"semantic", "play in film"}}}});
  ASSERT_EQ(patterns.status, 200) << patterns.raw;
  EXPECT_EQ(patterns.body, to_json(tools.search_graph_patterns(kTomHanksAnchor, "play in film")));
  EXPECT_EQ(patterns.body["text"].get<std::string>().rfind("(?e, film.actor.film -> film.performance.film, ", 0), 0u);

  const auto limited = post(c, "/tools/search-graph-patterns",
                            {{"kb", "CWQ"}, {"args", {{"sparql", kTomHanksAnchor}, {"semantic", "film"}, {"k", 1}}}});
  EXPECT_EQ(limited.body["patterns"].size(), 1u);

  const auto exec = post(c, "/tools/execute-sparql",
                         {{"kb", "CWQ"},
                          {"args",
                           {{"sparql",
                             "SELECT ?n WHERE { ?e type.object.name \"Tom Hanks\"@en . ?e film.actor.film ?c . "
                             "?c film.performance.film ?m . ?m type.object.name ?n . }"}}}});
  ASSERT_EQ(exec.status, 200) << exec.raw;
  EXPECT_EQ(exec.body["kind"], "ResultList");
  EXPECT_NE(exec.body["text"].get<std::string>().find("Nothing in Common"), std::string::npos);

  EXPECT_EQ(post(c, "/tools/search-nodes", {{"kb", "Nope"}, {"args", {{"name", "x"}}}}).status, 400);
  EXPECT_EQ(post(c, "/tools/search-nodes", {{"kb", "CWQ"}, {"args", json::object()}}).status, 400);
  EXPECT_EQ(post(c, "/tools/search-nodes", {{"args", {{"name", "x"}}}}).status, 400);
  // A tool-level failure is an Error observation, not an HTTP error.
  const auto bad = post(c, "/tools/execute-sparql", {{"kb", "CWQ"}, {"args", {{"sparql", "SELECT"}}}});
  EXPECT_EQ(bad.status, 200);
  EXPECT_EQ(bad.body["kind"], "ErrorMessage");
  EXPECT_EQ(s.service().session_count(), 0u);
}

TEST(Service, CorsPreflight) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  auto r = c.Options("/sessions");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_NE(r->get_header_value("Access-Control-Allow-Methods").find("POST"), std::string::npos);
  EXPECT_EQ(c.Get("/health")->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST(Service, ConcurrentSessionsAreIndependent) {
  fixtures::TempDir dir;
  Running s(dir.path());
  std::vector<std::string> ids;
  {
    auto c = s.client();
    for (int i = 0; i < 4; ++i) ids.push_back(review_session(c, tom_hanks_script())["id"]);
  }
  std::vector<std::thread> threads;
  for (const auto& id : ids)
    threads.emplace_back([&s, id] {
      auto c = s.client();
      for (int i = 0; i < 5; ++i) {
        post(c, "/sessions/" + id + "/propose");
        post(c, "/sessions/" + id + "/accept");
      }
    });
  for (auto& t : threads) t.join();
  auto c = s.client();
  for (const auto& id : ids) {
    const auto v = get(c, "/sessions/" + id);
    EXPECT_EQ(v.body["status"], "Done") << id;
    EXPECT_EQ(v.body["answer"], json::array({"Nothing in Common"}));
    EXPECT_EQ(read_jsonl(dir / (id + ".jsonl")).size(), 11u);
  }
}

TEST(Service, RestartRehydratesPendingProposal) {
  fixtures::TempDir dir;
  std::string id;
  json pending;
  {
    Running s(dir.path());
    auto c = s.client();
    id = review_session(c, tom_hanks_script())["id"];
    ASSERT_EQ(post(c, "/sessions/" + id + "/propose").status, 200);
    ASSERT_EQ(post(c, "/sessions/" + id + "/accept").status, 200);
    pending = post(c, "/sessions/" + id + "/propose").body["pendingProposal"];
  }
  std::ofstream(dir / "junk.jsonl") << "not a transcript\n";
  Running s(dir.path());
  EXPECT_EQ(s.service().rehydrated(), 1u);
  auto c = s.client();
  const auto v = get(c, "/sessions/" + id);
  ASSERT_EQ(v.status, 200);
  EXPECT_EQ(v.body["status"], "AwaitingReview");
  EXPECT_EQ(v.body["pendingProposal"], pending);
  EXPECT_EQ(v.body["turns"].size(), 1u);
  // The scripted agent resumes after the steps already consumed.
  for (int i = 0; i < 4; ++i) {
    ASSERT_EQ(post(c, "/sessions/" + id + "/accept").status, 200);
    if (get(c, "/sessions/" + id).body["status"] == "Done") break;
    ASSERT_EQ(post(c, "/sessions/" + id + "/propose").status, 200);
  }
  const auto done = get(c, "/sessions/" + id);
  EXPECT_EQ(done.body["status"], "Done");
  EXPECT_EQ(done.body["answer"], json::array({"Nothing in Common"}));
  EXPECT_EQ(load_transcript(dir / (id + ".jsonl")).utteranceCount, 9u);
}

TEST(SparqlEndpoint, GetAndPostMatchLocalEvaluation) {
  fixtures::TempDir dir;
  Running s(dir.path());
  auto c = s.client();
  const std::string q =
      "SELECT ?n WHERE { ?e type.object.name \"Tom Hanks\"@en . ?e film.actor.film ?c . ?c film.performance.film ?m . "
      "?m type.object.name ?n . }";
  const auto& kb = s.workspace().dataset("CWQ").kb;
  const auto expected = to_results_json(evaluate(kb, parse_sparql(q), {}), kb.schema().namespaceBase);

  auto g = c.Get("/sparql/CWQ?query=" + httplib::detail::encode_query_param(q));
  ASSERT_TRUE(g);
  EXPECT_EQ(g->status, 200);
  EXPECT_EQ(g->get_header_value("Content-Type"), "application/sparql-results+json");
  EXPECT_EQ(json::parse(g->body), expected);

  auto p = c.Post("/sparql/CWQ", q, "application/sparql-query");
  ASSERT_TRUE(p);
  EXPECT_EQ(json::parse(p->body), expected);

  EXPECT_EQ(c.Get("/sparql/Nope?query=x")->status, 404);
  EXPECT_EQ(c.Post("/sparql/CWQ", "SELECT", "application/sparql-query")->status, 400);
  EXPECT_EQ(c.Get("/sparql/CWQ")->status, 400);
}

TEST(SparqlBackend, ClientAgreesWithInMemoryEngine) {
  fixtures::TempDir dir;
  Running s(dir.path());
  const auto& kb = s.workspace().dataset("CWQ").kb;
  BackendOptions opt;
  opt.endpointUrl = s.url() + "/sparql/CWQ";
  opt.namespaceBase = kb.schema().namespaceBase;
  for (const char* text :
       {"SELECT ?n WHERE { ?e type.object.name \"Tom Hanks\"@en . ?e film.actor.film ?c . ?c film.performance.film ?m . "
        "?m type.object.name ?n . }",
        "SELECT ?e ?c WHERE { ?e type.object.name \"Tom Hanks\"@en . ?e film.actor.film ?c . }",
        "SELECT (COUNT(?c) AS ?k) WHERE { ?e film.actor.film ?c . }",
        "SELECT ?e WHERE { ?e type.object.name \"No Such Name\"@en . }"}) {
    const auto q = parse_sparql(text);
    EXPECT_EQ(query_backend(opt, q), evaluate(kb, q, {})) << text;
  }
}

TEST(SparqlBackend, Failures) {
  BackendOptions opt;
  opt.endpointUrl = "http://127.0.0.1:1/sparql";
  opt.timeout = std::chrono::milliseconds(300);
  const auto q = parse_sparql("SELECT ?e WHERE { ?e p ?o . }");
  try {
    query_backend(opt, q);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.status(), 0);
  }
  fixtures::LocalServer server;
  server.server.Post("/500", [](const httplib::Request&, httplib::Response& r) { r.status = 500; });
  server.server.Post("/junk", [](const httplib::Request&, httplib::Response& r) { r.set_content("[]", "application/json"); });
  server.start();
  opt.endpointUrl = server.url() + "/500";
  try {
    query_backend(opt, q);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_EQ(e.status(), 500);
  }
  opt.endpointUrl = server.url() + "/junk";
  EXPECT_THROW(query_backend(opt, q), ProtocolError);
}
