#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ikbqa/term.hpp"

namespace ikbqa {

enum class SchemaProfile { FreebaseLike, WikidataLike, PlainRdf };

/// Accepts "freebase", "wikidata" or "plain" (case-insensitive).
SchemaProfile parse_profile(std::string_view text);
std::string_view profile_name(SchemaProfile profile);

/// Decides which nodes are mediator (CVT) nodes.
struct CvtConfig {
  std::set<std::string> cvtTypeIris;
  bool treatNamelessIntermediatesAsCvt = false;
};

struct KbSchema {
  SchemaProfile profile = SchemaProfile::PlainRdf;
  std::string nameProperty;
  std::string descriptionProperty;  // empty when the source has none
  std::string typeProperty;
  /// IRIs under this base are stored by their local part ("type.object.name").
  std::string namespaceBase;
  CvtConfig cvt;

  static KbSchema defaults(SchemaProfile profile);
};

using TermId = std::uint32_t;

struct TripleIds {
  TermId s;
  TermId p;
  TermId o;
};

/// Immutable in-memory triple store. All lookups are const and safe to share
/// across threads once construction returns.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  /// Canonicalises IRIs, deduplicates and builds every index.
  static KnowledgeBase from_triples(std::vector<Triple> triples, KbSchema schema);

  const KbSchema& schema() const { return schema_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const std::vector<TripleIds>& triple_ids() const { return triples_; }
  Triple triple(std::size_t index) const;
  std::vector<Triple> all_triples() const;

  std::size_t term_count() const { return terms_.size(); }
  const Term& term(TermId id) const { return terms_[id]; }
  std::optional<TermId> lookup(const Term& term) const;

  std::string canonical_iri(std::string_view iri) const;
  /// IRIs are canonicalised; other terms are returned unchanged.
  Term canonical(const Term& term) const;
  /// Re-expands a canonical IRI to an absolute one for external endpoints.
  std::string absolute_iri(std::string_view canonical) const;

  std::span<const std::uint32_t> with_subject(TermId s) const;
  std::span<const std::uint32_t> with_predicate(TermId p) const;
  std::span<const std::uint32_t> with_object(TermId o) const;
  std::span<const std::uint32_t> with_subject_predicate(TermId s, TermId p) const;
  std::span<const std::uint32_t> with_predicate_object(TermId p, TermId o) const;
  bool contains(TermId s, TermId p, TermId o) const;

  /// All name literals of a node, sorted by lexical form.
  std::vector<std::string> names(TermId node) const;
  std::optional<std::string> name(TermId node) const;
  std::optional<std::string> description(TermId node) const;
  /// Display names of the node's classes, sorted.
  std::vector<std::string> type_names(TermId node) const;
  bool is_cvt(TermId node) const;

  /// Human-facing rendering: name for named IRIs, the IRI otherwise, the
  /// lexical form for literals.
  std::string display(const Term& term) const;
  std::string display(TermId id) const { return display(terms_[id]); }

 private:
  TermId intern(const Term& term);
  std::optional<TermId> property_id(const std::string& iri) const;

  KbSchema schema_;
  std::vector<Term> terms_;
  std::unordered_map<Term, TermId> ids_;
  std::vector<TripleIds> triples_;
  std::vector<std::vector<std::uint32_t>> bySubject_;
  std::vector<std::vector<std::uint32_t>> byPredicate_;
  std::vector<std::vector<std::uint32_t>> byObject_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> bySubjectPredicate_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> byPredicateObject_;
  std::optional<TermId> nameProp_;
  std::optional<TermId> descProp_;
  std::optional<TermId> typeProp_;
  std::vector<TermId> cvtClasses_;
};

}  // namespace ikbqa
