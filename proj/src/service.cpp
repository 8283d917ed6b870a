#include "ikbqa/service.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>

#include "httplib.h"
#include "ikbqa/evaluator.hpp"
#include "ikbqa/sparql.hpp"
#include "ikbqa/sparql_client.hpp"
#include "ikbqa/transcript.hpp"

namespace ikbqa {

using nlohmann::json;

json session_view(const DialogueSession& s) {
  json turns = json::array();
  for (const auto& t : s.history) turns.push_back(to_json(t));
  json pending;
  if (s.status == SessionStatus::AwaitingReview && s.pending)
    pending = {{"thought", s.pending->thought}, {"actionText", s.pending->actionText}};
  return {{"id", s.id},
          {"question", s.question},
          {"dataset", s.dataset},
          {"questionType", s.questionType ? json(to_string(*s.questionType)) : json()},
          {"mode", to_string(s.options.mode)},
          {"status", to_string(s.status)},
          {"turns", turns},
          {"pendingProposal", pending},
          {"answer", s.answer ? json(*s.answer) : json()},
          {"exemplars", s.prompt.exemplars.size()},
          {"error", s.error},
          {"metrics",
           {{"utterances", s.utteranceCount},
            {"interventions", s.interventions},
            {"promptTokens", s.cost.promptTokens},
            {"completionTokens", s.cost.completionTokens},
            {"dollars", s.cost.dollars}}}};
}

namespace {

struct HttpError {
  int status;
  std::string message;
};

struct Entry {
  std::mutex mutex;
  DialogueSession session;
  std::unique_ptr<Agent> agent;
  std::string agentError;
  std::unique_ptr<TranscriptWriter> writer;
  const DialogueEngine* engine = nullptr;
};

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') return false;
  return true;
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
    return j;
  } catch (const json::exception& e) {
    throw HttpError{400, std::string("malformed JSON: ") + e.what()};
  }
}

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw HttpError{400, std::string("missing string field ") + key};
  return j[key].get<std::string>();
}

}  // namespace

struct Service::Impl {
  Workspace& ws;
  httplib::Server server;
  mutable std::shared_mutex mapMutex;
  std::map<std::string, std::shared_ptr<Entry>> sessions;
  std::size_t rehydrated = 0;
  std::mt19937_64 rng{std::random_device{}()};
  std::mutex rngMutex;

  explicit Impl(Workspace& w) : ws(w) {
    std::filesystem::create_directories(ws.config().sessionDir);
    rehydrate();
    routes();
  }

  std::filesystem::path transcript_path(const std::string& id) const {
    return ws.config().sessionDir / (id + ".jsonl");
  }

  std::string new_id() {
    std::lock_guard lock(rngMutex);
    for (;;) {
      char buf[17];
      std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
      std::string id = std::string("s") + std::string(buf, 12);
      std::shared_lock read(mapMutex);
      if (!sessions.count(id) && !std::filesystem::exists(transcript_path(id))) return id;
    }
  }

  void attach_agent(Entry& e) {
    const std::size_t consumed = e.session.history.size() + (e.session.pending ? 1 : 0);
    try {
      e.agent = ws.make_agent(e.session.agentSpec, e.session.options.mode, consumed);
    } catch (const std::exception& ex) {
      e.agentError = ex.what();
    }
  }

  void rehydrate() {
    std::vector<std::filesystem::path> files;
    for (const auto& f : std::filesystem::directory_iterator(ws.config().sessionDir))
      if (f.path().extension() == ".jsonl") files.push_back(f.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto e = std::make_shared<Entry>();
      try {
        e->session = load_transcript(f);
        e->engine = ws.dataset(e->session.dataset).engine.get();
      } catch (const std::exception&) {
        continue;  // unreadable transcripts stay on disk untouched
      }
      if (!valid_id(e->session.id) || f.stem() != e->session.id) continue;
      e->writer = std::make_unique<TranscriptWriter>(f, false);
      e->session.sink = e->writer->sink();
      attach_agent(*e);
      sessions[e->session.id] = e;
      ++rehydrated;
    }
  }

  std::shared_ptr<Entry> find(const std::string& id) const {
    std::shared_lock lock(mapMutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, "unknown session " + id};
    return it->second;
  }

  json create(const json& body) {
    SessionRequest req;
    req.question = required_string(body, "question");
    req.dataset = required_string(body, "dataset");
    try {
      if (body.contains("mode")) req.mode = parse_review_mode(body["mode"].get<std::string>());
      if (body.contains("shots")) {
        if (body["shots"].is_string() && body["shots"] == "all") req.shots = kAllShots;
        else req.shots = body["shots"].get<std::size_t>();
      }
      if (body.contains("type")) req.type = parse_question_type(body["type"].get<std::string>());
    } catch (const std::exception& e) {
      throw HttpError{400, e.what()};
    }
    if (body.contains("script")) {
      if (!body["script"].is_array()) throw HttpError{400, "script must be an array of {thought, action}"};
      req.agentSpec = {{"kind", "scripted"}, {"script", body["script"]}};
    } else {
      req.agentSpec = {{"kind", "llm"}};
    }

    auto e = std::make_shared<Entry>();
    req.id = new_id();
    try {
      e->engine = ws.dataset(req.dataset).engine.get();
      e->agent = ws.make_agent(req.agentSpec, req.mode.value_or(ws.config().dialogue.mode));
    } catch (const std::exception& ex) {
      throw HttpError{400, ex.what()};
    }
    e->writer = std::make_unique<TranscriptWriter>(transcript_path(req.id));
    req.sink = e->writer->sink();
    try {
      e->session = ws.prepare(std::move(req));
    } catch (const std::exception& ex) {
      std::filesystem::remove(e->writer->path());
      throw HttpError{400, ex.what()};
    }
    std::unique_lock lock(mapMutex);
    sessions[e->session.id] = e;
    return session_view(e->session);
  }

  template <typename Fn>
  json mutate(const std::string& id, Fn&& fn) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    try {
      fn(*e);
    } catch (const StateError& ex) {
      throw HttpError{409, ex.what()};
    } catch (const CorrectionError& ex) {
      throw HttpError{422, ex.what()};
    }
    return session_view(e->session);
  }

  void need_agent(Entry& e) {
    if (!e.agent) throw HttpError{503, "no agent for this session: " + e.agentError};
  }

  const Toolbox& tools_for(const json& body) {
    try {
      return *ws.dataset(required_string(body, "kb")).tools;
    } catch (const ConfigError& e) {
      throw HttpError{400, e.what()};
    }
  }

  static std::optional<std::size_t> k_of(const json& args) {
    if (args.contains("k") && args["k"].is_number_unsigned()) return args["k"].get<std::size_t>();
    return std::nullopt;
  }

  template <typename Fn>
  void handle(const httplib::Request& req, httplib::Response& res, int okStatus, Fn&& fn) {
    try {
      json out = fn(req);
      res.status = okStatus;
      res.set_content(out.dump(), "application/json");
    } catch (const HttpError& e) {
      res.status = e.status;
      res.set_content(json{{"error", e.message}}.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
  }

  void sparql(const httplib::Request& req, httplib::Response& res) {
    try {
      const auto& r = ws.dataset(req.matches[1]);
      std::string text = req.has_param("query") ? req.get_param_value("query") : std::string();
      if (text.empty() && req.get_header_value("Content-Type").rfind("application/sparql-query", 0) == 0)
        text = req.body;
      if (text.empty()) throw HttpError{400, "missing query"};
      SelectQuery q;
      try {
        q = parse_sparql(text);
      } catch (const SparqlError& e) {
        throw HttpError{400, e.what()};
      }
      const auto table = evaluate(r.kb, q, {ws.config().tools.resultCap, ws.config().tools.joinBudget});
      res.set_content(to_results_json(table, r.kb.schema().namespaceBase).dump(), "application/sparql-results+json");
    } catch (const HttpError& e) {
      res.status = e.status;
      res.set_content(e.message, "text/plain");
    } catch (const ConfigError& e) {
      res.status = 404;
      res.set_content(e.what(), "text/plain");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(e.what(), "text/plain");
    }
  }

  void routes() {
    const std::string origin = ws.config().corsOrigin;
    if (!origin.empty())
      server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                  {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/health", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [](const httplib::Request&) { return json{{"ok", true}}; });
    });

    server.Post("/sessions", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 201, [this](const httplib::Request& req) { return create(parse_body(req)); });
    });

    server.Get("/sessions", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request&) {
        std::vector<std::shared_ptr<Entry>> all;
        {
          std::shared_lock lock(mapMutex);
          for (const auto& [id, e] : sessions) all.push_back(e);
        }
        json list = json::array();
        for (const auto& e : all) {
          std::lock_guard lock(e->mutex);
          const auto& s = e->session;
          list.push_back({{"id", s.id},
                          {"question", s.question},
                          {"dataset", s.dataset},
                          {"mode", to_string(s.options.mode)},
                          {"status", to_string(s.status)},
                          {"utterances", s.utteranceCount}});
        }
        return json{{"sessions", list}};
      });
    });

    server.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        auto e = find(req.matches[1]);
        std::lock_guard lock(e->mutex);
        return session_view(e->session);
      });
    });

    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/propose)", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        return mutate(req.matches[1], [this](Entry& e) {
          need_agent(e);
          e.engine->propose(e.session, *e.agent);
        });
      });
    });

    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/run)", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        return mutate(req.matches[1], [this](Entry& e) {
          need_agent(e);
          if (e.session.status != SessionStatus::Running)
            throw StateError("cannot run a session in state " + std::string(to_string(e.session.status)));
          e.engine->run(e.session, *e.agent);
        });
      });
    });

    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/accept)", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        return mutate(req.matches[1], [this](Entry& e) { e.engine->accept(e.session); });
      });
    });

    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/revise)", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        const json body = parse_body(req);
        const std::string thought = body.contains("thought") && body["thought"].is_string() ? body["thought"].get<std::string>() : "";
        const std::string action = required_string(body, "actionText");
        return mutate(req.matches[1], [&](Entry& e) { e.engine->revise(e.session, thought, action); });
      });
    });

    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/transcript)", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto e = find(req.matches[1]);
        std::lock_guard lock(e->mutex);
        std::ifstream in(e->writer->path(), std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        res.set_header("Content-Disposition", "attachment; filename=\"" + e->session.id + ".jsonl\"");
        res.set_content(buf.str(), "application/x-ndjson");
      } catch (const HttpError& e) {
        res.status = e.status;
        res.set_content(json{{"error", e.message}}.dump(), "application/json");
      }
    });

    server.Post("/tools/search-nodes", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        const json body = parse_body(req);
        const json args = body.value("args", json::object());
        return to_json(tools_for(body).search_nodes(required_string(args, "name"), k_of(args)));
      });
    });

    server.Post("/tools/search-graph-patterns", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        const json body = parse_body(req);
        const json args = body.value("args", json::object());
        return to_json(tools_for(body).search_graph_patterns(required_string(args, "sparql"),
                                                             required_string(args, "semantic"), k_of(args)));
      });
    });

    server.Post("/tools/execute-sparql", [this](const httplib::Request& q, httplib::Response& r) {
      handle(q, r, 200, [this](const httplib::Request& req) {
        const json body = parse_body(req);
        const json args = body.value("args", json::object());
        return to_json(tools_for(body).execute_sparql(required_string(args, "sparql"), k_of(args)));
      });
    });

    server.Get(R"(/sparql/([A-Za-z]+))", [this](const httplib::Request& q, httplib::Response& r) { sparql(q, r); });
    server.Post(R"(/sparql/([A-Za-z]+))", [this](const httplib::Request& q, httplib::Response& r) { sparql(q, r); });
  }
};

Service::Service(Workspace& workspace) : impl_(std::make_unique<Impl>(workspace)) {}
Service::~Service() { stop(); }

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int Service::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool Service::run() { return impl_->server.listen_after_bind(); }
void Service::stop() {
  if (impl_) impl_->server.stop();
}
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::size_t Service::session_count() const {
  std::shared_lock lock(impl_->mapMutex);
  return impl_->sessions.size();
}

std::size_t Service::rehydrated() const { return impl_->rehydrated; }

}  // namespace ikbqa
