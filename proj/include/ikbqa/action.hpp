#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ikbqa {

enum class ActionKind { SearchNodes, SearchGraphPatterns, ExecuteSPARQL, Done };

std::string_view tool_name(ActionKind kind);

/// A tool call. `args` holds the unescaped string arguments in parameter
/// order: SearchNodes(name), SearchGraphPatterns(sparql, semantic),
/// ExecuteSPARQL(sparql), Done().
struct Action {
  ActionKind kind = ActionKind::Done;
  std::vector<std::string> args;

  static Action search_nodes(std::string name) { return {ActionKind::SearchNodes, {std::move(name)}}; }
  static Action search_graph_patterns(std::string sparql, std::string semantic) {
    return {ActionKind::SearchGraphPatterns, {std::move(sparql), std::move(semantic)}};
  }
  static Action execute_sparql(std::string sparql) { return {ActionKind::ExecuteSPARQL, {std::move(sparql)}}; }
  static Action done() { return {ActionKind::Done, {}}; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// Either an action or a diagnostic; parse_action never throws.
struct ActionParse {
  std::optional<Action> action;
  std::string error;

  bool ok() const { return action.has_value(); }
};

/// Parses a Python-style call such as
///   SearchGraphPatterns('SELECT ?e WHERE {...}', semantic="play in film")
/// Strings may use ' " ''' or """ quoting with backslash escapes. `Done`
/// may appear bare.
ActionParse parse_action(std::string_view text);

/// Canonical form: double-quoted, escaped, `semantic=` passed by keyword.
std::string serialize_action(const Action& action);

}  // namespace ikbqa
