#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ikbqa/name_index.hpp"
#include "json.hpp"

namespace ikbqa {

enum class ObservationKind { NodeList, TripleList, ResultList, ErrorMessage };

std::string_view to_string(ObservationKind kind);
ObservationKind parse_observation_kind(std::string_view text);

enum class Direction { Outgoing, Incoming };

/// One flattened one-hop pattern around the anchor ?e. `predicatePath` is a
/// single predicate or "p1 -> p2" through a mediator node.
struct GraphPatternHit {
  std::string anchorVar = "?e";
  std::string predicatePath;
  Direction direction = Direction::Outgoing;
  std::string exampleObject;
  double score = 0.0;

  bool compound() const { return predicatePath.find(" -> ") != std::string::npos; }
  /// (?e, path, "example") or ("example", path, ?e)
  std::string render() const;

  friend bool operator==(const GraphPatternHit&, const GraphPatternHit&) = default;
};

/// Result rows rendered to display strings.
struct ResultPayload {
  std::vector<std::string> variables;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const ResultPayload&, const ResultPayload&) = default;
};

struct Observation {
  ObservationKind kind = ObservationKind::ErrorMessage;
  std::string text;
  /// Some hits or rows were left out, by the top-k limit or the character cap.
  bool truncated = false;
  std::vector<NodeHit> nodes;
  std::vector<GraphPatternHit> patterns;
  ResultPayload results;

  static Observation error(std::string message);

  /// Display strings of the first result column (ResultList only).
  std::vector<std::string> answers() const;

  friend bool operator==(const Observation&, const Observation&) = default;
};

nlohmann::json to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& j);

inline constexpr std::string_view kTruncationMarker = "…(truncated)";

/// Joins lines with '\n', dropping trailing lines so the result (marker
/// included) stays within `cap` code points. Returns {text, capped}.
std::pair<std::string, bool> cap_lines(const std::vector<std::string>& lines, std::size_t cap);

/// "[a, b, c]" with items dropped from the end when over the cap.
std::pair<std::string, bool> cap_list(const std::vector<std::string>& items, std::size_t cap);

}  // namespace ikbqa
