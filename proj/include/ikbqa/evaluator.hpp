#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ikbqa/knowledge_base.hpp"
#include "ikbqa/sparql.hpp"

namespace ikbqa {

struct ResultTable {
  std::vector<std::string> variables;
  std::vector<std::vector<Term>> rows;
  bool truncated = false;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

struct EvalOptions {
  std::size_t resultCap = 2000;
  /// Upper bound on candidate triples examined across all join levels.
  std::uint64_t joinBudget = 20'000'000;
};

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates a parsed query against the store. Rows whose filter comparison
/// cannot be coerced are dropped; exceeding the join budget throws
/// ResourceLimitError.
ResultTable evaluate(const KnowledgeBase& kb, const SelectQuery& query, const EvalOptions& options = {});

/// Outcome of comparing two terms under the literal coercion rules:
/// numeric, then ISO-8601 date/time, then codepoint string order.
enum class Comparison { Less, Equal, Greater, Unequal, Incomparable };

Comparison compare_terms(const Term& a, const Term& b);

/// nullopt when the comparison is a type error (the row is dropped).
std::optional<bool> filter_holds(CompareOp op, const Term& a, const Term& b);

/// Total order used by ORDER BY: numbers < dates < other literals < IRIs.
int order_compare(const Term& a, const Term& b);

std::optional<double> parse_numeric(const std::string& lexical);

/// Normalised sortable key for an ISO-8601 prefix (YYYY[-MM[-DD[THH:MM[:SS[.f]]]]][Z]).
std::optional<std::string> parse_datetime(const std::string& lexical);

}  // namespace ikbqa
