#include "ikbqa/knowledge_base.hpp"

#include <algorithm>
#include <stdexcept>

namespace ikbqa {

namespace {

std::uint64_t pair_key(TermId a, TermId b) { return (std::uint64_t{a} << 32) | b; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace

SchemaProfile parse_profile(std::string_view text) {
  const auto t = lower(text);
  if (t == "freebase" || t == "freebaselike") return SchemaProfile::FreebaseLike;
  if (t == "wikidata" || t == "wikidatalike") return SchemaProfile::WikidataLike;
  if (t == "plain" || t == "plainrdf") return SchemaProfile::PlainRdf;
  throw std::invalid_argument("unknown schema profile: " + std::string(text));
}

std::string_view profile_name(SchemaProfile profile) {
  switch (profile) {
    case SchemaProfile::FreebaseLike: return "freebase";
    case SchemaProfile::WikidataLike: return "wikidata";
    case SchemaProfile::PlainRdf: return "plain";
  }
  return "plain";
}

KbSchema KbSchema::defaults(SchemaProfile profile) {
  KbSchema s;
  s.profile = profile;
  switch (profile) {
    case SchemaProfile::FreebaseLike:
      s.nameProperty = "type.object.name";
      s.descriptionProperty = "common.topic.description";
      s.typeProperty = "type.object.type";
      s.namespaceBase = "http://rdf.freebase.com/ns/";
      s.cvt.treatNamelessIntermediatesAsCvt = true;
      s.cvt.cvtTypeIris = {"type.cvt"};
      break;
    case SchemaProfile::WikidataLike:
      // Statement nodes carry no label and are flattened like CVTs.
      s.nameProperty = "label";
      s.descriptionProperty = "description";
      s.typeProperty = "instance_of";
      s.namespaceBase = "http://www.example.org/wd/";
      s.cvt.treatNamelessIntermediatesAsCvt = true;
      s.cvt.cvtTypeIris = {"Statement"};
      break;
    case SchemaProfile::PlainRdf:
      s.nameProperty = "name";
      s.typeProperty = "type";
      s.namespaceBase = "http://www.example.org/movie/";
      break;
  }
  return s;
}

std::string KnowledgeBase::canonical_iri(std::string_view iri) const {
  const auto& base = schema_.namespaceBase;
  if (!base.empty() && iri.size() > base.size() && iri.substr(0, base.size()) == base)
    return std::string(iri.substr(base.size()));
  return std::string(iri);
}

Term KnowledgeBase::canonical(const Term& term) const {
  if (term.is_iri()) return Term::iri(canonical_iri(term.value()));
  return term;
}

std::string KnowledgeBase::absolute_iri(std::string_view canonical) const {
  if (canonical.find(':') != std::string_view::npos || schema_.namespaceBase.empty())
    return std::string(canonical);
  return schema_.namespaceBase + std::string(canonical);
}

TermId KnowledgeBase::intern(const Term& term) {
  auto [it, inserted] = ids_.try_emplace(term, static_cast<TermId>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

KnowledgeBase KnowledgeBase::from_triples(std::vector<Triple> triples, KbSchema schema) {
  KnowledgeBase kb;
  kb.schema_ = std::move(schema);
  const bool fbNames = kb.schema_.profile == SchemaProfile::FreebaseLike;
  for (auto& t : triples) {
    if (!t.subject.is_iri() || !t.predicate.is_iri() || t.object.is_variable())
      throw std::invalid_argument("triple positions must be IRI, IRI, IRI-or-literal");
    t.subject = kb.canonical(t.subject);
    t.predicate = kb.canonical(t.predicate);
    t.object = kb.canonical(t.object);
    if (fbNames && t.predicate.value() == kb.schema_.nameProperty && t.object.is_literal() &&
        t.object.lang().empty() && t.object.datatype().empty())
      t.object = Term::literal(t.object.value(), "en");
  }
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

  kb.triples_.reserve(triples.size());
  for (const auto& t : triples) {
    const TermId s = kb.intern(t.subject);
    const TermId p = kb.intern(t.predicate);
    const TermId o = kb.intern(t.object);
    kb.triples_.push_back({s, p, o});
  }
  const auto n = kb.terms_.size();
  kb.bySubject_.resize(n);
  kb.byPredicate_.resize(n);
  kb.byObject_.resize(n);
  for (std::uint32_t i = 0; i < kb.triples_.size(); ++i) {
    const auto& t = kb.triples_[i];
    kb.bySubject_[t.s].push_back(i);
    kb.byPredicate_[t.p].push_back(i);
    kb.byObject_[t.o].push_back(i);
    kb.bySubjectPredicate_[pair_key(t.s, t.p)].push_back(i);
    kb.byPredicateObject_[pair_key(t.p, t.o)].push_back(i);
  }
  kb.nameProp_ = kb.property_id(kb.schema_.nameProperty);
  kb.descProp_ = kb.property_id(kb.schema_.descriptionProperty);
  kb.typeProp_ = kb.property_id(kb.schema_.typeProperty);
  for (const auto& cls : kb.schema_.cvt.cvtTypeIris)
    if (auto id = kb.lookup(Term::iri(kb.canonical_iri(cls)))) kb.cvtClasses_.push_back(*id);
  return kb;
}

std::optional<TermId> KnowledgeBase::property_id(const std::string& iri) const {
  if (iri.empty()) return std::nullopt;
  return lookup(Term::iri(canonical_iri(iri)));
}

Triple KnowledgeBase::triple(std::size_t index) const {
  const auto& t = triples_.at(index);
  return {terms_[t.s], terms_[t.p], terms_[t.o]};
}

std::vector<Triple> KnowledgeBase::all_triples() const {
  std::vector<Triple> out;
  out.reserve(triples_.size());
  for (std::size_t i = 0; i < triples_.size(); ++i) out.push_back(triple(i));
  return out;
}

std::optional<TermId> KnowledgeBase::lookup(const Term& term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::uint32_t> KnowledgeBase::with_subject(TermId s) const {
  if (s >= bySubject_.size()) return {};
  return bySubject_[s];
}

std::span<const std::uint32_t> KnowledgeBase::with_predicate(TermId p) const {
  if (p >= byPredicate_.size()) return {};
  return byPredicate_[p];
}

std::span<const std::uint32_t> KnowledgeBase::with_object(TermId o) const {
  if (o >= byObject_.size()) return {};
  return byObject_[o];
}

std::span<const std::uint32_t> KnowledgeBase::with_subject_predicate(TermId s, TermId p) const {
  auto it = bySubjectPredicate_.find(pair_key(s, p));
  if (it == bySubjectPredicate_.end()) return {};
  return it->second;
}

std::span<const std::uint32_t> KnowledgeBase::with_predicate_object(TermId p, TermId o) const {
  auto it = byPredicateObject_.find(pair_key(p, o));
  if (it == byPredicateObject_.end()) return {};
  return it->second;
}

bool KnowledgeBase::contains(TermId s, TermId p, TermId o) const {
  for (auto i : with_subject_predicate(s, p))
    if (triples_[i].o == o) return true;
  return false;
}

std::vector<std::string> KnowledgeBase::names(TermId node) const {
  std::vector<std::string> out;
  if (!nameProp_) return out;
  for (auto i : with_subject_predicate(node, *nameProp_)) {
    const auto& obj = terms_[triples_[i].o];
    if (obj.is_literal()) out.push_back(obj.value());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::string> KnowledgeBase::name(TermId node) const {
  auto all = names(node);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::optional<std::string> KnowledgeBase::description(TermId node) const {
  if (!descProp_) return std::nullopt;
  std::optional<std::string> best;
  for (auto i : with_subject_predicate(node, *descProp_)) {
    const auto& obj = terms_[triples_[i].o];
    if (obj.is_literal() && (!best || obj.value() < *best)) best = obj.value();
  }
  return best;
}

std::vector<std::string> KnowledgeBase::type_names(TermId node) const {
  std::vector<std::string> out;
  if (!typeProp_) return out;
  for (auto i : with_subject_predicate(node, *typeProp_)) out.push_back(display(triples_[i].o));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool KnowledgeBase::is_cvt(TermId node) const {
  if (node >= terms_.size() || !terms_[node].is_iri()) return false;
  if (typeProp_) {
    for (auto i : with_subject_predicate(node, *typeProp_))
      if (std::find(cvtClasses_.begin(), cvtClasses_.end(), triples_[i].o) != cvtClasses_.end())
        return true;
  }
  if (schema_.cvt.treatNamelessIntermediatesAsCvt) {
    if (!nameProp_) return true;
    return with_subject_predicate(node, *nameProp_).empty();
  }
  return false;
}

std::string KnowledgeBase::display(const Term& term) const {
  switch (term.kind()) {
    case TermKind::Literal: return term.value();
    case TermKind::Variable: return "?" + term.value();
    case TermKind::Iri: {
      if (auto id = lookup(term))
        if (auto n = name(*id)) return *n;
      return term.value();
    }
  }
  return term.value();
}

}  // namespace ikbqa
