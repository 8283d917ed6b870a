#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ikbqa/kernels.hpp"
#include "ikbqa/knowledge_base.hpp"

namespace ikbqa {

struct NodeHit {
  std::string iri;
  std::string formalName;
  std::optional<std::string> description;
  std::vector<std::string> types;
  double score = 0.0;

  friend bool operator==(const NodeHit&, const NodeHit&) = default;
};

/// Surface-name index over every (node, name) pair of the KB's name property.
class NameIndex {
 public:
  NameIndex() = default;
  explicit NameIndex(const KnowledgeBase& kb);

  std::size_t size() const { return entries_.size(); }
  const std::vector<NameEntry>& entries() const { return entries_; }

  /// Top-k nodes, one hit per node under its best-scoring name. Ordered by
  /// score descending, ties by IRI. Blank queries return nothing.
  std::vector<NodeHit> search(std::string_view query, std::size_t k) const;

 private:
  const KnowledgeBase* kb_ = nullptr;
  std::vector<NameEntry> entries_;
};

inline NameIndex build_name_index(const KnowledgeBase& kb) { return NameIndex(kb); }

}  // namespace ikbqa
