#include "ikbqa/observation.hpp"

#include <stdexcept>

#include "ikbqa/text.hpp"

namespace ikbqa {

std::string_view to_string(ObservationKind kind) {
  switch (kind) {
    case ObservationKind::NodeList: return "NodeList";
    case ObservationKind::TripleList: return "TripleList";
    case ObservationKind::ResultList: return "ResultList";
    case ObservationKind::ErrorMessage: return "ErrorMessage";
  }
  return "ErrorMessage";
}

ObservationKind parse_observation_kind(std::string_view text) {
  if (text == "NodeList") return ObservationKind::NodeList;
  if (text == "TripleList") return ObservationKind::TripleList;
  if (text == "ResultList") return ObservationKind::ResultList;
  if (text == "ErrorMessage") return ObservationKind::ErrorMessage;
  throw std::invalid_argument("unknown observation kind: " + std::string(text));
}

std::string GraphPatternHit::render() const {
  const std::string example = "\"" + exampleObject + "\"";
  if (direction == Direction::Outgoing) return "(" + anchorVar + ", " + predicatePath + ", " + example + ")";
  return "(" + example + ", " + predicatePath + ", " + anchorVar + ")";
}

Observation Observation::error(std::string message) {
  Observation o;
  o.kind = ObservationKind::ErrorMessage;
  o.text = std::move(message);
  return o;
}

std::vector<std::string> Observation::answers() const {
  std::vector<std::string> out;
  if (kind != ObservationKind::ResultList) return out;
  for (const auto& row : results.rows)
    if (!row.empty()) out.push_back(row.front());
  return out;
}

std::pair<std::string, bool> cap_lines(const std::vector<std::string>& lines, std::size_t cap) {
  std::string all;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) all += '\n';
    all += lines[i];
  }
  if (utf8_length(all) <= cap) return {all, false};
  const std::size_t markerLen = utf8_length(kTruncationMarker);
  std::string out;
  std::size_t used = 0;
  for (const auto& line : lines) {
    const std::size_t add = utf8_length(line) + 1;  // line + newline before marker
    if (used + add + markerLen > cap) break;
    out += line;
    out += '\n';
    used += add;
  }
  if (markerLen <= cap) out += kTruncationMarker;
  return {out, true};
}

std::pair<std::string, bool> cap_list(const std::vector<std::string>& items, std::size_t cap) {
  std::string all = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) all += ", ";
    all += items[i];
  }
  all += "]";
  if (utf8_length(all) <= cap) return {all, false};
  const std::size_t tail = utf8_length(kTruncationMarker) + 1;  // marker + ']'
  std::string out = "[";
  std::size_t used = 1;
  for (const auto& item : items) {
    const std::size_t add = utf8_length(item) + 2;  // item + ", "
    if (used + add + tail > cap) break;
    out += item;
    out += ", ";
    used += add;
  }
  out += kTruncationMarker;
  out += "]";
  return {out, true};
}

nlohmann::json to_json(const Observation& obs) {
  nlohmann::json j = {{"kind", to_string(obs.kind)}, {"text", obs.text}, {"truncated", obs.truncated}};
  if (!obs.nodes.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& n : obs.nodes) {
      nlohmann::json h = {{"iri", n.iri}, {"formalName", n.formalName}, {"types", n.types}, {"score", n.score}};
      if (n.description) h["description"] = *n.description;
      arr.push_back(std::move(h));
    }
    j["nodes"] = std::move(arr);
  }
  if (!obs.patterns.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& p : obs.patterns)
      arr.push_back({{"anchorVar", p.anchorVar},
                     {"predicatePath", p.predicatePath},
                     {"direction", p.direction == Direction::Outgoing ? "Outgoing" : "Incoming"},
                     {"exampleObject", p.exampleObject},
                     {"score", p.score}});
    j["patterns"] = std::move(arr);
  }
  if (obs.kind == ObservationKind::ResultList)
    j["results"] = {{"variables", obs.results.variables}, {"rows", obs.results.rows}};
  return j;
}

Observation observation_from_json(const nlohmann::json& j) {
  Observation o;
  o.kind = parse_observation_kind(j.at("kind").get<std::string>());
  o.text = j.at("text").get<std::string>();
  o.truncated = j.value("truncated", false);
  if (j.contains("nodes"))
    for (const auto& h : j["nodes"]) {
      NodeHit n;
      n.iri = h.at("iri").get<std::string>();
      n.formalName = h.at("formalName").get<std::string>();
      if (h.contains("description")) n.description = h["description"].get<std::string>();
      n.types = h.value("types", std::vector<std::string>{});
      n.score = h.value("score", 0.0);
      o.nodes.push_back(std::move(n));
    }
  if (j.contains("patterns"))
    for (const auto& p : j["patterns"]) {
      GraphPatternHit g;
      g.anchorVar = p.value("anchorVar", std::string("?e"));
      g.predicatePath = p.at("predicatePath").get<std::string>();
      g.direction = p.at("direction").get<std::string>() == "Incoming" ? Direction::Incoming : Direction::Outgoing;
      g.exampleObject = p.at("exampleObject").get<std::string>();
      g.score = p.value("score", 0.0);
      o.patterns.push_back(std::move(g));
    }
  if (j.contains("results")) {
    o.results.variables = j["results"].at("variables").get<std::vector<std::string>>();
    o.results.rows = j["results"].at("rows").get<std::vector<std::vector<std::string>>>();
  }
  return o;
}

}  // namespace ikbqa
