#include "ikbqa/toolbox.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "ikbqa/evaluator.hpp"
#include "ikbqa/sparql.hpp"
#include "ikbqa/text.hpp"

namespace ikbqa {

namespace {

bool starts_with_keyword(std::string_view s, std::size_t pos, std::string_view kw) {
  if (s.size() - pos < kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(s[pos + i])) != kw[i]) return false;
  return true;
}

std::size_t skip_space(std::string_view s, std::size_t pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  return pos;
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string dquote(std::string_view s) { return "\"" + std::string(s) + "\""; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

bool has_anchor_prefix(std::string_view s) {
  std::size_t pos = skip_space(s, 0);
  while (starts_with_keyword(s, pos, "PREFIX")) {
    const auto close = s.find('>', pos);
    if (close == std::string_view::npos) return false;
    pos = skip_space(s, close + 1);
  }
  if (!starts_with_keyword(s, pos, "SELECT")) return false;
  pos += 6;
  const std::size_t afterSelect = pos;
  pos = skip_space(s, pos);
  if (pos == afterSelect || s.substr(pos, 2) != "?e") return false;
  pos += 2;
  if (pos < s.size() && is_name_char(s[pos])) return false;
  const std::size_t afterVar = pos;
  pos = skip_space(s, pos);
  if (pos == afterVar || !starts_with_keyword(s, pos, "WHERE")) return false;
  pos += 5;
  return pos == s.size() || !is_name_char(s[pos]);
}

Toolbox::Toolbox(const KnowledgeBase& kb, const NameIndex& index, const SimilarityRanker& ranker, ToolConfig config)
    : kb_(&kb), index_(&index), ranker_(&ranker), config_(config) {}

Observation Toolbox::search_nodes(std::string_view name, std::optional<std::size_t> k) const {
  try {
    if (trim(name).empty()) return Observation::error("SearchNodes needs a non-blank name");
    const std::size_t limit = k.value_or(config_.topK);
    auto hits = index_->search(name, limit + 1);
    if (hits.empty()) return Observation::error("no nodes found matching " + std::string(name));
    Observation obs;
    obs.kind = ObservationKind::NodeList;
    bool cut = hits.size() > limit;
    if (cut) hits.resize(limit);
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const auto& h = hits[i];
      lines.push_back(std::to_string(i + 1) + ". " + dquote(h.formalName) + " | description: " +
                      h.description.value_or("-") + " | types: " + (h.types.empty() ? "-" : join(h.types, ", ")));
    }
    auto [text, capped] = cap_lines(lines, config_.observationCharCap);
    obs.text = std::move(text);
    obs.truncated = cut || capped;
    obs.nodes = std::move(hits);
    return obs;
  } catch (const std::exception& e) {
    return Observation::error(e.what());
  }
}

std::vector<GraphPatternHit> Toolbox::collect_patterns(const std::vector<TermId>& anchors) const {
  const KnowledgeBase& kb = *kb_;
  // (path, direction) -> smallest example display string
  std::map<std::pair<std::string, Direction>, std::string> found;
  auto add = [&](std::string path, Direction dir, std::string example) {
    auto [it, inserted] = found.try_emplace({std::move(path), dir}, example);
    if (!inserted && example < it->second) it->second = std::move(example);
  };

  for (TermId a : anchors) {
    for (auto i : kb.with_subject(a)) {
      const auto& t = kb.triple_ids()[i];
      const std::string p1 = kb.term(t.p).value();
      if (kb.term(t.o).is_iri() && kb.is_cvt(t.o)) {
        for (auto j : kb.with_subject(t.o)) {
          const auto& u = kb.triple_ids()[j];
          if (u.o == a) continue;
          add(p1 + " -> " + kb.term(u.p).value(), Direction::Outgoing, kb.display(u.o));
        }
      } else {
        add(p1, Direction::Outgoing, kb.display(t.o));
      }
    }
    for (auto i : kb.with_object(a)) {
      const auto& t = kb.triple_ids()[i];
      const std::string p2 = kb.term(t.p).value();
      if (kb.is_cvt(t.s)) {
        for (auto j : kb.with_object(t.s)) {
          const auto& u = kb.triple_ids()[j];
          if (u.s == a) continue;
          add(kb.term(u.p).value() + " -> " + p2, Direction::Incoming, kb.display(u.s));
        }
      } else {
        add(p2, Direction::Incoming, kb.display(t.s));
      }
    }
  }
  std::vector<GraphPatternHit> out;
  out.reserve(found.size());
  for (auto& [key, example] : found) {
    GraphPatternHit h;
    h.predicatePath = key.first;
    h.direction = key.second;
    h.exampleObject = example;
    out.push_back(std::move(h));
  }
  return out;
}

Observation Toolbox::search_graph_patterns(std::string_view sparql, std::string_view semantic,
                                           std::optional<std::size_t> k) const {
  try {
    if (!has_anchor_prefix(sparql)) return Observation::error("query must begin with SELECT ?e WHERE");
    SelectQuery q;
    try {
      q = parse_sparql(sparql);
    } catch (const SparqlError& e) {
      return Observation::error(e.what());
    }
    EvalOptions opts{config_.resultCap, config_.joinBudget};
    const ResultTable table = evaluate(*kb_, q, opts);
    const auto col = std::find(table.variables.begin(), table.variables.end(), "e");
    if (col == table.variables.end()) return Observation::error("query must begin with SELECT ?e WHERE");
    const auto c = static_cast<std::size_t>(col - table.variables.begin());

    std::vector<TermId> anchors;
    std::set<TermId> seen;
    for (const auto& row : table.rows) {
      if (anchors.size() >= config_.maxAnchors) break;
      if (!row[c].is_iri()) continue;
      auto id = kb_->lookup(row[c]);
      if (id && seen.insert(*id).second) anchors.push_back(*id);
    }
    if (anchors.empty()) return Observation::error("anchor matched no nodes");

    auto patterns = collect_patterns(anchors);
    if (patterns.empty()) return Observation::error("anchor has no edges");

    std::vector<std::pair<std::string, std::string>> candidates;
    candidates.reserve(patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      std::string label;
      std::size_t start = 0;
      const std::string& path = patterns[i].predicatePath;
      while (true) {
        const auto arrow = path.find(" -> ", start);
        if (!label.empty()) label += ' ';
        label += predicate_label(path.substr(start, arrow == std::string::npos ? std::string::npos : arrow - start));
        if (arrow == std::string::npos) break;
        start = arrow + 4;
      }
      if (config_.rankWithObjectText) label += " " + normalize_name(patterns[i].exampleObject);
      candidates.emplace_back(std::to_string(i), std::move(label));
    }
    const auto ranked = rank_by_similarity(*ranker_, semantic, candidates);

    const std::size_t limit = k.value_or(config_.topK);
    Observation obs;
    obs.kind = ObservationKind::TripleList;
    std::vector<std::string> lines;
    for (const auto& r : ranked) {
      if (obs.patterns.size() >= limit) break;
      GraphPatternHit h = patterns[std::stoul(r.key)];
      h.score = r.score;
      lines.push_back(h.render());
      obs.patterns.push_back(std::move(h));
    }
    auto [text, capped] = cap_lines(lines, config_.observationCharCap);
    obs.text = std::move(text);
    obs.truncated = ranked.size() > limit || capped;
    return obs;
  } catch (const std::exception& e) {
    return Observation::error(e.what());
  }
}

Observation Toolbox::execute_sparql(std::string_view sparql, std::optional<std::size_t> k) const {
  try {
    SelectQuery q;
    try {
      q = parse_sparql(sparql);
    } catch (const SparqlError& e) {
      return Observation::error(e.what());
    }
    EvalOptions opts{config_.resultCap, config_.joinBudget};
    const ResultTable table = evaluate(*kb_, q, opts);

    const std::size_t limit = k.value_or(config_.topK);
    Observation obs;
    obs.kind = ObservationKind::ResultList;
    obs.results.variables = table.variables;
    std::vector<std::string> items;
    for (const auto& row : table.rows) {
      if (obs.results.rows.size() >= limit) break;
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const auto& term : row) cells.push_back(kb_->display(term));
      if (cells.size() == 1) {
        items.push_back(dquote(cells.front()));
      } else {
        std::vector<std::string> qs;
        for (const auto& cell : cells) qs.push_back(dquote(cell));
        items.push_back("(" + join(qs, ", ") + ")");
      }
      obs.results.rows.push_back(std::move(cells));
    }
    auto [text, capped] = cap_list(items, config_.observationCharCap);
    obs.text = std::move(text);
    obs.truncated = table.rows.size() > limit || table.truncated || capped;
    return obs;
  } catch (const std::exception& e) {
    return Observation::error(e.what());
  }
}

}  // namespace ikbqa
