#pragma once
// Random KB/query generator and a brute-force reference evaluator. The
// reference walks every triple for every pattern in written order, with no
// indexes and no reordering, then applies the filter, projection and DISTINCT.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ikbqa/sparql.hpp"
#include "ikbqa/term.hpp"

namespace oracle {

using ikbqa::CompareOp;
using ikbqa::Term;
using Row = std::vector<Term>;

struct Slot {
  std::string var;  // empty for a constant
  Term term;
};

struct Pattern {
  Slot s, p, o;
};

struct Filter {
  CompareOp op = CompareOp::Eq;
  std::string lhs;
  Slot rhs;
};

struct Count {
  std::string var;  // empty: COUNT(*)
  bool distinct = false;
};

struct Query {
  bool selectAll = false;
  bool distinct = false;
  std::vector<std::string> projection;
  std::optional<Count> count;
  std::vector<Pattern> patterns;
  std::optional<Filter> filter;

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& p : patterns)
      for (const Slot* s : {&p.s, &p.p, &p.o})
        if (!s->var.empty() && std::find(out.begin(), out.end(), s->var) == out.end()) out.push_back(s->var);
    return out;
  }
};

inline std::string term_text(const Term& t) {
  if (t.is_iri()) return t.value();
  if (t.datatype() == ikbqa::xsd::kInteger) return t.value();
  std::string out = "\"" + t.value() + "\"";
  if (!t.lang().empty()) out += "@" + t.lang();
  if (t.datatype() == ikbqa::xsd::kDate) out += "^^xsd:date";
  return out;
}

inline std::string slot_text(const Slot& s) { return s.var.empty() ? term_text(s.term) : "?" + s.var; }

inline std::string op_text(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

inline std::string to_text(const Query& q) {
  std::string out = "SELECT ";
  if (q.count) {
    out += "(COUNT(";
    if (q.count->distinct) out += "DISTINCT ";
    out += q.count->var.empty() ? "*" : "?" + q.count->var;
    out += ") AS ?cnt)";
  } else {
    if (q.distinct) out += "DISTINCT ";
    if (q.selectAll) out += "*";
    for (std::size_t i = 0; i < q.projection.size(); ++i) out += (i ? " ?" : "?") + q.projection[i];
  }
  out += " WHERE { ";
  for (const auto& p : q.patterns) out += slot_text(p.s) + " " + slot_text(p.p) + " " + slot_text(p.o) + " . ";
  if (q.filter) out += "FILTER(?" + q.filter->lhs + " " + op_text(q.filter->op) + " " + slot_text(q.filter->rhs) + ") ";
  return out + "}";
}

// Literal ordering per the documented coercion: integers numerically, every
// other pair of literals by code points. Generated data never mixes the two
// in a way where date normalisation would differ from the lexical order.
inline bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline std::optional<bool> holds(CompareOp op, const Term& a, const Term& b) {
  int c;
  if (a.is_literal() && b.is_literal()) {
    if (all_digits(a.value()) && all_digits(b.value())) {
      const long x = std::stol(a.value()), y = std::stol(b.value());
      c = x < y ? -1 : x > y ? 1 : 0;
    } else {
      c = a.value() < b.value() ? -1 : a.value() > b.value() ? 1 : 0;
    }
  } else if (a == b) {
    c = 0;
  } else {
    if (op == CompareOp::Eq) return false;
    if (op == CompareOp::Ne) return true;
    return std::nullopt;
  }
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return std::nullopt;
}

using Binding = std::map<std::string, Term>;

inline bool bind(Binding& b, const Slot& s, const Term& value) {
  if (s.var.empty()) return s.term == value;
  auto [it, inserted] = b.emplace(s.var, value);
  return inserted || it->second == value;
}

inline void walk(const std::vector<ikbqa::Triple>& triples, const Query& q, std::size_t i, const Binding& b,
                 std::vector<Binding>& out) {
  if (i == q.patterns.size()) {
    out.push_back(b);
    return;
  }
  const auto& p = q.patterns[i];
  for (const auto& t : triples) {
    Binding next = b;
    if (bind(next, p.s, t.subject) && bind(next, p.p, t.predicate) && bind(next, p.o, t.object))
      walk(triples, q, i + 1, next, out);
  }
}

/// Reference result rows, sorted. `triples` may contain duplicates.
inline std::vector<Row> enumerate(std::vector<ikbqa::Triple> triples, const Query& q) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  std::vector<Binding> solutions;
  walk(triples, q, 0, {}, solutions);
  if (q.filter) {
    std::vector<Binding> kept;
    for (const auto& b : solutions) {
      const Term& lhs = b.at(q.filter->lhs);
      const Term& rhs = q.filter->rhs.var.empty() ? q.filter->rhs.term : b.at(q.filter->rhs.var);
      if (holds(q.filter->op, lhs, rhs).value_or(false)) kept.push_back(b);
    }
    solutions = std::move(kept);
  }
  std::vector<Row> rows;
  if (q.count) {
    std::size_t n = solutions.size();
    if (q.count->distinct) {
      std::set<Term> seen;
      for (const auto& b : solutions) seen.insert(q.count->var.empty() ? Term() : b.at(q.count->var));
      n = seen.size();
    }
    rows.push_back({Term::literal(std::to_string(n), {}, ikbqa::xsd::kInteger)});
    return rows;
  }
  const auto cols = q.selectAll ? q.variables() : q.projection;
  for (const auto& b : solutions) {
    Row r;
    for (const auto& c : cols) r.push_back(b.at(c));
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());
  if (q.distinct) rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

struct Case {
  std::vector<ikbqa::Triple> triples;
  Query query;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  Term entity(int n) { return Term::iri("e" + std::to_string(uniform(0, n - 1))); }
  Term predicate(int n) { return Term::iri("p" + std::to_string(uniform(0, n - 1))); }

  Term literal() {
    switch (uniform(0, 3)) {
      case 0:
      case 1: return Term::literal(std::to_string(uniform(0, 30)), {}, ikbqa::xsd::kInteger);
      case 2: return Term::literal("w" + std::to_string(uniform(0, 5)), chance(0.3) ? "en" : "");
      default: {
        char buf[16];
        std::snprintf(buf, sizeof buf, "20%02d-%02d-%02d", uniform(0, 20), uniform(1, 12), uniform(1, 28));
        return Term::literal(buf, {}, ikbqa::xsd::kDate);
      }
    }
  }

  Case next(int maxTriples = 200) {
    Case c;
    const int entities = uniform(3, 25);
    const int predicates = uniform(1, 6);
    const int n = uniform(1, maxTriples);
    for (int i = 0; i < n; ++i)
      c.triples.push_back({entity(entities), predicate(predicates), chance(0.6) ? entity(entities) : literal()});

    Query& q = c.query;
    const int patterns = uniform(1, 3);
    std::vector<std::string> pool = {"a", "b", "c", "d"};
    auto slot = [&](double varProb, auto constant) {
      if (chance(varProb)) return Slot{pool[static_cast<std::size_t>(uniform(0, 3))], {}};
      return Slot{"", constant()};
    };
    for (int i = 0; i < patterns; ++i) {
      const auto& seed = c.triples[static_cast<std::size_t>(uniform(0, n - 1))];
      Pattern p;
      p.s = slot(0.7, [&] { return chance(0.7) ? seed.subject : entity(entities); });
      p.p = slot(0.25, [&] { return chance(0.8) ? seed.predicate : predicate(predicates); });
      p.o = slot(0.65, [&] { return chance(0.7) ? seed.object : chance(0.5) ? entity(entities) : literal(); });
      q.patterns.push_back(p);
    }
    auto vars = q.variables();
    if (vars.empty()) {
      q.patterns.front().s = Slot{"a", {}};
      vars = q.variables();
    }
    const int shape = uniform(0, 19);
    if (shape < 3) {
      q.selectAll = true;
    } else if (shape < 6) {
      Count cnt;
      cnt.distinct = chance(0.5);
      if (!chance(0.25) || cnt.distinct) cnt.var = vars[static_cast<std::size_t>(uniform(0, int(vars.size()) - 1))];
      q.count = cnt;
    } else {
      std::shuffle(vars.begin(), vars.end(), rng_);
      vars.resize(static_cast<std::size_t>(uniform(1, int(vars.size()))));
      q.projection = vars;
    }
    if (!q.count) q.distinct = chance(0.3);
    if (chance(0.5)) {
      const auto all = q.variables();
      Filter f;
      f.op = static_cast<CompareOp>(uniform(0, 5));
      f.lhs = all[static_cast<std::size_t>(uniform(0, int(all.size()) - 1))];
      if (chance(0.35)) f.rhs = Slot{all[static_cast<std::size_t>(uniform(0, int(all.size()) - 1))], {}};
      else f.rhs = Slot{"", chance(0.75) ? literal() : entity(entities)};
      q.filter = f;
    }
    return c;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
