#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ikbqa/term.hpp"

namespace ikbqa {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);

/// A triple whose positions may be variables.
struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

/// `lhs` is always a variable; `rhs` is a variable or a constant.
struct FilterExpr {
  CompareOp op = CompareOp::Eq;
  Term lhs;
  Term rhs;
  friend bool operator==(const FilterExpr&, const FilterExpr&) = default;
};

/// COUNT([DISTINCT] ?var) AS ?alias. An empty variable means COUNT(*).
struct CountAggregate {
  std::string variable;
  bool distinct = false;
  std::string alias;
  friend bool operator==(const CountAggregate&, const CountAggregate&) = default;
};

enum class SortDirection { Asc, Desc };

struct OrderKey {
  std::string variable;
  SortDirection direction = SortDirection::Asc;
  friend bool operator==(const OrderKey&, const OrderKey&) = default;
};

struct SelectQuery {
  std::map<std::string, std::string> prefixes;
  bool selectAll = false;
  std::vector<std::string> projection;
  std::optional<CountAggregate> count;
  bool distinct = false;
  std::vector<TriplePattern> patterns;
  std::vector<FilterExpr> filters;
  std::optional<OrderKey> orderBy;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> offset;

  /// Variables in pattern order of first appearance.
  std::vector<std::string> pattern_variables() const;
  /// Column names of the result table.
  std::vector<std::string> output_variables() const;

  friend bool operator==(const SelectQuery&, const SelectQuery&) = default;
};

class SparqlError : public std::runtime_error {
 public:
  SparqlError(std::size_t offset, const std::string& message)
      : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        message_(message) {}
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

/// Parses the supported SELECT subset. Throws SparqlError on any syntax
/// error, undeclared prefix or unsupported construct.
SelectQuery parse_sparql(std::string_view text);

using IriMapper = std::function<std::string(const std::string&)>;

/// Canonical text form; parse_sparql(serialize_sparql(q)) == q. The optional
/// mapper rewrites every IRI (e.g. to absolute form for external endpoints).
std::string serialize_sparql(const SelectQuery& query, const IriMapper& mapper = {});

/// Renders a single term in SPARQL syntax. Bare local names stay bare.
std::string sparql_term(const Term& term, const IriMapper& mapper = {});

}  // namespace ikbqa
