#pragma once

#include <memory>
#include <string>

#include "ikbqa/dialogue.hpp"
#include "ikbqa/workspace.hpp"
#include "json.hpp"

namespace ikbqa {

/// JSON rendering of a session for API clients.
nlohmann::json session_view(const DialogueSession& session);

/// HTTP API over a workspace: session lifecycle, the review workflow, tool
/// probes, transcripts, and a SPARQL-protocol endpoint per dataset.
/// Sessions are persisted as transcript files under the configured session
/// directory and re-read on construction.
class Service {
 public:
  explicit Service(Workspace& workspace);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); serve with run().
  int bind_any_port(const std::string& host);
  /// Serves on a socket bound by bind_any_port; blocks until stop().
  bool run();
  void stop();
  void wait_until_ready() const;

  std::size_t session_count() const;
  /// Sessions restored from disk at construction.
  std::size_t rehydrated() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ikbqa
