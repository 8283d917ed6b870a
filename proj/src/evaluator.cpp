#include "ikbqa/evaluator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <unordered_map>

namespace ikbqa {

std::optional<double> parse_numeric(const std::string& lexical) {
  if (lexical.empty()) return std::nullopt;
  const char* first = lexical.data();
  const char* last = first + lexical.size();
  if (*first == '+') ++first;
  double value = 0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<std::string> parse_datetime(const std::string& s) {
  auto digits = [&](std::size_t at, std::size_t n) {
    if (at + n > s.size()) return false;
    for (std::size_t i = at; i < at + n; ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!digits(0, 4)) return std::nullopt;
  std::string year = s.substr(0, 4), month = "01", day = "01", hour = "00", minute = "00",
              second = "00", frac = "000000";
  std::size_t i = 4;
  auto done = [&]() -> bool {
    if (i == s.size()) return true;
    if (s[i] == 'Z' && i + 1 == s.size()) return true;
    if ((s[i] == '+' || s[i] == '-') && i + 6 == s.size() && digits(i + 1, 2) && s[i + 3] == ':' &&
        digits(i + 4, 2))
      return true;
    return false;
  };
  if (!done()) {
    if (s[i] != '-' || !digits(i + 1, 2)) return std::nullopt;
    month = s.substr(i + 1, 2);
    i += 3;
    if (!done()) {
      if (s[i] != '-' || !digits(i + 1, 2)) return std::nullopt;
      day = s.substr(i + 1, 2);
      i += 3;
      if (!done()) {
        if (s[i] != 'T' || !digits(i + 1, 2) || i + 3 >= s.size() || s[i + 3] != ':' ||
            !digits(i + 4, 2))
          return std::nullopt;
        hour = s.substr(i + 1, 2);
        minute = s.substr(i + 4, 2);
        i += 6;
        if (i < s.size() && s[i] == ':') {
          if (!digits(i + 1, 2)) return std::nullopt;
          second = s.substr(i + 1, 2);
          i += 3;
          if (i < s.size() && s[i] == '.') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
            if (j == i + 1) return std::nullopt;
            frac = s.substr(i + 1, std::min<std::size_t>(6, j - i - 1));
            frac.resize(6, '0');
            i = j;
          }
        }
        if (!done()) return std::nullopt;
      }
    }
  }
  if (month < "01" || month > "12" || day < "01" || day > "31") return std::nullopt;
  return year + "-" + month + "-" + day + "T" + hour + ":" + minute + ":" + second + "." + frac;
}

Comparison compare_terms(const Term& a, const Term& b) {
  if (a.is_literal() && b.is_literal()) {
    const auto na = parse_numeric(a.value());
    const auto nb = parse_numeric(b.value());
    if (na && nb) {
      if (*na < *nb) return Comparison::Less;
      if (*na > *nb) return Comparison::Greater;
      return Comparison::Equal;
    }
    const auto da = parse_datetime(a.value());
    const auto db = parse_datetime(b.value());
    const std::string& ka = (da && db) ? *da : a.value();
    const std::string& kb = (da && db) ? *db : b.value();
    const int c = ka.compare(kb);
    return c < 0 ? Comparison::Less : c > 0 ? Comparison::Greater : Comparison::Equal;
  }
  if (a.is_variable() || b.is_variable()) return Comparison::Incomparable;
  if (a == b) return Comparison::Equal;
  return Comparison::Unequal;
}

std::optional<bool> filter_holds(CompareOp op, const Term& a, const Term& b) {
  const auto c = compare_terms(a, b);
  switch (c) {
    case Comparison::Incomparable: return std::nullopt;
    case Comparison::Unequal:
      if (op == CompareOp::Eq) return false;
      if (op == CompareOp::Ne) return true;
      return std::nullopt;
    default: break;
  }
  switch (op) {
    case CompareOp::Eq: return c == Comparison::Equal;
    case CompareOp::Ne: return c != Comparison::Equal;
    case CompareOp::Lt: return c == Comparison::Less;
    case CompareOp::Le: return c != Comparison::Greater;
    case CompareOp::Gt: return c == Comparison::Greater;
    case CompareOp::Ge: return c != Comparison::Less;
  }
  return std::nullopt;
}

namespace {

int sort_class(const Term& t) {
  if (!t.is_literal()) return 3;
  if (parse_numeric(t.value())) return 0;
  if (parse_datetime(t.value())) return 1;
  return 2;
}

}  // namespace

int order_compare(const Term& a, const Term& b) {
  const int ca = sort_class(a), cb = sort_class(b);
  if (ca != cb) return ca < cb ? -1 : 1;
  switch (ca) {
    case 0: {
      const double x = *parse_numeric(a.value()), y = *parse_numeric(b.value());
      return x < y ? -1 : x > y ? 1 : 0;
    }
    case 1: return parse_datetime(a.value())->compare(*parse_datetime(b.value()));
    default: {
      const int c = a.value().compare(b.value());
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
  }
}

namespace {

constexpr TermId kUnbound = std::numeric_limits<TermId>::max();

struct Slot {
  int var = -1;            // >= 0 for variables
  TermId constant = kUnbound;
};

struct CompiledPattern {
  Slot s, p, o;
  std::size_t original = 0;
};

struct CompiledFilter {
  CompareOp op;
  int lhs = -1;
  int rhsVar = -1;
  Term rhs;
};

class Joiner {
 public:
  Joiner(const KnowledgeBase& kb, std::vector<CompiledPattern> patterns, std::size_t slots,
         std::uint64_t budget)
      : kb_(kb), patterns_(std::move(patterns)), binding_(slots, kUnbound), budget_(budget) {}

  std::vector<std::vector<TermId>> run() {
    recurse(0);
    return std::move(rows_);
  }

 private:
  TermId resolve(const Slot& s) const { return s.var >= 0 ? binding_[s.var] : s.constant; }

  std::span<const std::uint32_t> candidates(TermId s, TermId p, TermId o, bool& all) const {
    all = false;
    if (s != kUnbound && p != kUnbound) return kb_.with_subject_predicate(s, p);
    if (p != kUnbound && o != kUnbound) return kb_.with_predicate_object(p, o);
    if (s != kUnbound) return kb_.with_subject(s);
    if (o != kUnbound) return kb_.with_object(o);
    if (p != kUnbound) return kb_.with_predicate(p);
    all = true;
    return {};
  }

  bool bind(const Slot& slot, TermId value, std::vector<int>& newly) {
    if (slot.var < 0) return slot.constant == value;
    TermId& b = binding_[slot.var];
    if (b == kUnbound) {
      b = value;
      newly.push_back(slot.var);
      return true;
    }
    return b == value;
  }

  void visit(std::size_t depth, std::uint32_t index) {
    if (++work_ > budget_)
      throw ResourceLimitError("query exceeded the join work budget of " + std::to_string(budget_));
    const auto& pat = patterns_[depth];
    const auto& t = kb_.triple_ids()[index];
    std::vector<int> newly;
    if (bind(pat.s, t.s, newly) && bind(pat.p, t.p, newly) && bind(pat.o, t.o, newly))
      recurse(depth + 1);
    for (int v : newly) binding_[v] = kUnbound;
  }

  void recurse(std::size_t depth) {
    if (depth == patterns_.size()) {
      rows_.push_back(binding_);
      return;
    }
    const auto& pat = patterns_[depth];
    bool all = false;
    auto span = candidates(resolve(pat.s), resolve(pat.p), resolve(pat.o), all);
    if (all) {
      const auto n = static_cast<std::uint32_t>(kb_.size());
      for (std::uint32_t i = 0; i < n; ++i) visit(depth, i);
    } else {
      for (auto i : span) visit(depth, i);
    }
  }

  const KnowledgeBase& kb_;
  std::vector<CompiledPattern> patterns_;
  std::vector<TermId> binding_;
  std::vector<std::vector<TermId>> rows_;
  std::uint64_t budget_;
  std::uint64_t work_ = 0;
};

std::size_t estimate(const KnowledgeBase& kb, const CompiledPattern& p) {
  const bool s = p.s.var < 0, pr = p.p.var < 0, o = p.o.var < 0;
  if (s && pr && o) return kb.contains(p.s.constant, p.p.constant, p.o.constant) ? 1 : 0;
  if (s && pr) return kb.with_subject_predicate(p.s.constant, p.p.constant).size();
  if (pr && o) return kb.with_predicate_object(p.p.constant, p.o.constant).size();
  if (s && o) return std::min(kb.with_subject(p.s.constant).size(), kb.with_object(p.o.constant).size());
  if (s) return kb.with_subject(p.s.constant).size();
  if (o) return kb.with_object(p.o.constant).size();
  if (pr) return kb.with_predicate(p.p.constant).size();
  return kb.size();
}

// Greedy selectivity order; patterns sharing a bound variable go first so the
// plan never builds a cross product it can avoid.
std::vector<CompiledPattern> order_patterns(const KnowledgeBase& kb, std::vector<CompiledPattern> in) {
  std::vector<CompiledPattern> out;
  std::set<int> bound;
  auto vars_of = [](const CompiledPattern& p) {
    std::vector<int> v;
    for (const auto* s : {&p.s, &p.p, &p.o})
      if (s->var >= 0) v.push_back(s->var);
    return v;
  };
  while (!in.empty()) {
    std::size_t best = 0;
    std::tuple<int, std::size_t, std::size_t> bestKey{2, 0, 0};
    for (std::size_t i = 0; i < in.size(); ++i) {
      const auto vars = vars_of(in[i]);
      const bool connected =
          bound.empty() || std::any_of(vars.begin(), vars.end(), [&](int v) { return bound.count(v); });
      std::tuple<int, std::size_t, std::size_t> key{connected ? 0 : 1, estimate(kb, in[i]), in[i].original};
      if (i == 0 || key < bestKey) {
        bestKey = key;
        best = i;
      }
    }
    for (int v : vars_of(in[best])) bound.insert(v);
    out.push_back(in[best]);
    in.erase(in.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

struct RowHash {
  std::size_t operator()(const std::vector<TermId>& r) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : r) h = (h ^ v) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

ResultTable evaluate(const KnowledgeBase& kb, const SelectQuery& q, const EvalOptions& options) {
  ResultTable table;
  table.variables = q.output_variables();

  const auto vars = q.pattern_variables();
  auto slot_of = [&](const std::string& name) -> int {
    auto it = std::find(vars.begin(), vars.end(), name);
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
  };

  bool missingConstant = false;
  auto compile = [&](const Term& t) {
    Slot s;
    if (t.is_variable()) {
      s.var = slot_of(t.value());
    } else if (auto id = kb.lookup(kb.canonical(t))) {
      s.constant = *id;
    } else {
      missingConstant = true;
    }
    return s;
  };
  std::vector<CompiledPattern> patterns;
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    const auto& p = q.patterns[i];
    patterns.push_back({compile(p.subject), compile(p.predicate), compile(p.object), i});
  }

  std::vector<std::vector<TermId>> rows;
  if (!missingConstant && !patterns.empty())
    rows = Joiner(kb, order_patterns(kb, std::move(patterns)), vars.size(), options.joinBudget).run();

  if (!q.filters.empty()) {
    std::vector<CompiledFilter> filters;
    for (const auto& f : q.filters) {
      CompiledFilter cf{f.op, slot_of(f.lhs.value()), -1, kb.canonical(f.rhs)};
      if (f.rhs.is_variable()) cf.rhsVar = slot_of(f.rhs.value());
      filters.push_back(std::move(cf));
    }
    std::erase_if(rows, [&](const std::vector<TermId>& row) {
      for (const auto& f : filters) {
        if (f.lhs < 0 || (f.rhs.is_variable() && f.rhsVar < 0)) return true;
        const Term& lhs = kb.term(row[f.lhs]);
        const Term& rhs = f.rhsVar >= 0 ? kb.term(row[f.rhsVar]) : f.rhs;
        auto holds = filter_holds(f.op, lhs, rhs);
        if (!holds || !*holds) return true;
      }
      return false;
    });
  }

  std::vector<std::vector<Term>> out;
  if (q.count) {
    std::size_t n = rows.size();
    if (!q.count->variable.empty() && q.count->distinct) {
      const int slot = slot_of(q.count->variable);
      std::set<TermId> seen;
      for (const auto& r : rows) seen.insert(r[slot]);
      n = seen.size();
    } else if (q.count->distinct) {
      std::set<std::vector<TermId>> seen(rows.begin(), rows.end());
      n = seen.size();
    }
    out.push_back({Term::literal(std::to_string(n), {}, xsd::kInteger)});
  } else {
    if (q.orderBy) {
      const int slot = slot_of(q.orderBy->variable);
      const bool desc = q.orderBy->direction == SortDirection::Desc;
      std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        const int c = order_compare(kb.term(a[slot]), kb.term(b[slot]));
        return desc ? c > 0 : c < 0;
      });
    }
    std::vector<int> proj;
    for (const auto& v : table.variables) proj.push_back(slot_of(v));
    std::vector<std::vector<TermId>> projected;
    projected.reserve(rows.size());
    for (const auto& r : rows) {
      std::vector<TermId> p;
      p.reserve(proj.size());
      for (int s : proj) p.push_back(r[s]);
      projected.push_back(std::move(p));
    }
    if (q.distinct) {
      std::unordered_map<std::vector<TermId>, bool, RowHash> seen;
      std::vector<std::vector<TermId>> unique;
      for (auto& r : projected)
        if (seen.emplace(r, true).second) unique.push_back(std::move(r));
      projected = std::move(unique);
    }
    for (const auto& r : projected) {
      std::vector<Term> row;
      row.reserve(r.size());
      for (auto id : r) row.push_back(kb.term(id));
      out.push_back(std::move(row));
    }
  }

  const std::size_t offset = q.offset ? static_cast<std::size_t>(std::min<std::uint64_t>(*q.offset, out.size())) : 0;
  std::size_t end = out.size();
  if (q.limit) end = std::min<std::size_t>(end, offset + static_cast<std::size_t>(std::min<std::uint64_t>(*q.limit, out.size())));
  if (end - offset > options.resultCap) {
    end = offset + options.resultCap;
    table.truncated = true;
  }
  table.rows.assign(std::make_move_iterator(out.begin() + static_cast<std::ptrdiff_t>(offset)),
                    std::make_move_iterator(out.begin() + static_cast<std::ptrdiff_t>(end)));
  return table;
}

}  // namespace ikbqa
