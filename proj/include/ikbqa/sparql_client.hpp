#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ikbqa/evaluator.hpp"
#include "ikbqa/sparql.hpp"
#include "json.hpp"

namespace ikbqa {

/// Transport failure or non-2xx answer from an external endpoint.
class BackendError : public std::runtime_error {
 public:
  BackendError(int status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  /// HTTP status, or 0 when no response was received.
  int status() const { return status_; }

 private:
  int status_;
};

/// The endpoint answered but the body is not valid SPARQL results JSON.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BackendOptions {
  std::string endpointUrl;
  std::chrono::milliseconds timeout{5000};
  std::size_t resultCap = 2000;
  /// Local names are expanded under this base when sent, and stripped from
  /// returned IRIs, mirroring KnowledgeBase canonicalisation.
  std::string namespaceBase;
};

/// Runs a query against a SPARQL-protocol endpoint (HTTP POST, form-encoded
/// `query`, Accept: application/sparql-results+json).
ResultTable query_backend(const BackendOptions& options, const SelectQuery& query);

/// application/sparql-results+json encoding. IRIs are expanded with
/// `namespaceBase` when it is non-empty.
nlohmann::json to_results_json(const ResultTable& table, std::string_view namespaceBase = {});

ResultTable from_results_json(std::string_view body, std::size_t resultCap, std::string_view namespaceBase = {});

struct ParsedUrl {
  std::string schemeHostPort;  // "http://host:port"
  std::string path;            // "/sparql"
};

ParsedUrl split_url(std::string_view url);

}  // namespace ikbqa
