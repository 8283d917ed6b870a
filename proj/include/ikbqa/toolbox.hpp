#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "ikbqa/knowledge_base.hpp"
#include "ikbqa/name_index.hpp"
#include "ikbqa/observation.hpp"
#include "ikbqa/similarity.hpp"

namespace ikbqa {

struct ToolConfig {
  std::size_t topK = 10;
  std::size_t observationCharCap = 2000;
  std::size_t maxAnchors = 50;
  std::size_t resultCap = 2000;
  std::uint64_t joinBudget = 20'000'000;
  /// Append the example object to the text each pattern is ranked by.
  bool rankWithObjectText = false;
};

/// The three agent-facing tools. Every call returns an Observation; errors
/// come back as ErrorMessage observations. Holds references only, so the
/// KB, index and ranker must outlive it.
class Toolbox {
 public:
  Toolbox(const KnowledgeBase& kb, const NameIndex& index, const SimilarityRanker& ranker, ToolConfig config = {});

  Observation search_nodes(std::string_view name, std::optional<std::size_t> k = {}) const;
  Observation search_graph_patterns(std::string_view sparql, std::string_view semantic,
                                    std::optional<std::size_t> k = {}) const;
  Observation execute_sparql(std::string_view sparql, std::optional<std::size_t> k = {}) const;

  /// Every one-hop pattern around the anchors, deduplicated and in (path,
  /// direction) order, before ranking. Exposed for property tests.
  std::vector<GraphPatternHit> collect_patterns(const std::vector<TermId>& anchors) const;

  const KnowledgeBase& kb() const { return *kb_; }
  const ToolConfig& config() const { return config_; }

 private:
  const KnowledgeBase* kb_;
  const NameIndex* index_;
  const SimilarityRanker* ranker_;
  ToolConfig config_;
};

/// True when the query begins with "SELECT ?e WHERE" once leading
/// whitespace and PREFIX declarations are skipped (keywords case-insensitive).
bool has_anchor_prefix(std::string_view sparql);

}  // namespace ikbqa
