#include "ikbqa/name_index.hpp"

#include <algorithm>
#include <map>

#include "ikbqa/text.hpp"

namespace ikbqa {

NameIndex::NameIndex(const KnowledgeBase& kb) : kb_(&kb) {
  const auto nameProp = kb.lookup(Term::iri(kb.canonical_iri(kb.schema().nameProperty)));
  if (!nameProp) return;
  for (auto i : kb.with_predicate(*nameProp)) {
    const auto& t = kb.triple_ids()[i];
    const Term& obj = kb.term(t.o);
    if (!obj.is_literal()) continue;
    NameEntry e;
    e.node = t.s;
    e.iri = kb.term(t.s).value();
    e.name = obj.value();
    e.normalized = normalize_name(e.name);
    e.tokens = token_set(e.name);
    entries_.push_back(std::move(e));
  }
  std::sort(entries_.begin(), entries_.end(), [](const NameEntry& a, const NameEntry& b) {
    return std::tie(a.iri, a.name) < std::tie(b.iri, b.name);
  });
  entries_.erase(std::unique(entries_.begin(), entries_.end(),
                             [](const NameEntry& a, const NameEntry& b) {
                               return a.iri == b.iri && a.name == b.name;
                             }),
                 entries_.end());
}

std::vector<NodeHit> NameIndex::search(std::string_view query, std::size_t k) const {
  std::vector<NodeHit> hits;
  if (!kb_ || k == 0) return hits;
  const auto q = make_name_query(query);
  if (q.normalized.empty()) return hits;

  const auto scores = score_names(q, entries_);
  // best name per node; entries are sorted by (iri, name) so ties keep the
  // lexicographically smallest name
  std::map<std::string, std::size_t> best;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (scores[i] <= 0.0) continue;
    auto [it, inserted] = best.try_emplace(entries_[i].iri, i);
    if (!inserted && scores[i] > scores[it->second]) it->second = i;
  }
  for (const auto& [iri, i] : best) {
    const auto& e = entries_[i];
    NodeHit h;
    h.iri = iri;
    h.formalName = e.name;
    h.description = kb_->description(e.node);
    h.types = kb_->type_names(e.node);
    h.score = scores[i];
    hits.push_back(std::move(h));
  }
  std::stable_sort(hits.begin(), hits.end(), [](const NodeHit& a, const NodeHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.iri < b.iri;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace ikbqa
