#include "ikbqa/sparql_client.hpp"

#include "httplib.h"

namespace ikbqa {

namespace {

std::string strip_base(const std::string& iri, std::string_view base) {
  if (!base.empty() && iri.size() > base.size() && std::string_view(iri).substr(0, base.size()) == base)
    return iri.substr(base.size());
  return iri;
}

std::string expand(const std::string& iri, std::string_view base) {
  if (base.empty() || iri.find(':') != std::string::npos) return iri;
  return std::string(base) + iri;
}

}  // namespace

ParsedUrl split_url(std::string_view url) {
  const auto scheme = url.find("://");
  const std::size_t hostStart = scheme == std::string_view::npos ? 0 : scheme + 3;
  const auto slash = url.find('/', hostStart);
  ParsedUrl out;
  if (slash == std::string_view::npos) {
    out.schemeHostPort = std::string(url);
    out.path = "/";
  } else {
    out.schemeHostPort = std::string(url.substr(0, slash));
    out.path = std::string(url.substr(slash));
  }
  return out;
}

nlohmann::json to_results_json(const ResultTable& table, std::string_view namespaceBase) {
  nlohmann::json bindings = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json b = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < table.variables.size(); ++i) {
      const Term& t = row[i];
      nlohmann::json cell;
      if (t.is_iri()) {
        if (t.value().rfind("_:", 0) == 0) {
          cell = {{"type", "bnode"}, {"value", t.value().substr(2)}};
        } else {
          cell = {{"type", "uri"}, {"value", expand(t.value(), namespaceBase)}};
        }
      } else {
        cell = {{"type", "literal"}, {"value", t.value()}};
        if (!t.lang().empty()) cell["xml:lang"] = t.lang();
        if (!t.datatype().empty()) cell["datatype"] = t.datatype();
      }
      b[table.variables[i]] = std::move(cell);
    }
    bindings.push_back(std::move(b));
  }
  return {{"head", {{"vars", table.variables}}}, {"results", {{"bindings", std::move(bindings)}}}};
}

ResultTable from_results_json(std::string_view body, std::size_t resultCap, std::string_view namespaceBase) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed result JSON: ") + e.what());
  }
  ResultTable table;
  try {
    for (const auto& v : doc.at("head").at("vars")) table.variables.push_back(v.get<std::string>());
    for (const auto& b : doc.at("results").at("bindings")) {
      if (table.rows.size() >= resultCap) {
        table.truncated = true;
        break;
      }
      std::vector<Term> row;
      for (const auto& var : table.variables) {
        if (!b.contains(var)) throw ProtocolError("unbound variable ?" + var + " in result row");
        const auto& cell = b.at(var);
        const auto type = cell.at("type").get<std::string>();
        const auto value = cell.at("value").get<std::string>();
        if (type == "uri") {
          row.push_back(Term::iri(strip_base(value, namespaceBase)));
        } else if (type == "bnode") {
          row.push_back(Term::iri("_:" + value));
        } else if (type == "literal" || type == "typed-literal") {
          row.push_back(Term::literal(value, cell.value("xml:lang", std::string{}),
                                      cell.value("datatype", std::string{})));
        } else {
          throw ProtocolError("unknown binding type " + type);
        }
      }
      table.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("unexpected result JSON shape: ") + e.what());
  }
  return table;
}

ResultTable query_backend(const BackendOptions& options, const SelectQuery& query) {
  const auto url = split_url(options.endpointUrl);
  httplib::Client client(url.schemeHostPort);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const std::string base = options.namespaceBase;
  const auto text = serialize_sparql(query, [&](const std::string& iri) { return expand(iri, base); });
  httplib::Params params{{"query", text}};
  httplib::Headers headers{{"Accept", "application/sparql-results+json"}};
  auto res = client.Post(url.path, headers, params);
  if (!res) throw BackendError(0, "endpoint request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw BackendError(res->status, "endpoint returned HTTP " + std::to_string(res->status));
  return from_results_json(res->body, options.resultCap, base);
}

}  // namespace ikbqa
