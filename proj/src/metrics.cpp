#include "ikbqa/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ikbqa/text.hpp"

namespace ikbqa {

namespace {

bool is_lang_tag(std::string_view tag) {
  if (tag.empty()) return false;
  bool subtag = false;
  std::size_t run = 0;
  for (char c : tag) {
    if (c == '-') {
      if (run == 0) return false;
      run = 0;
      subtag = true;
      continue;
    }
    const bool ok = std::isalpha(static_cast<unsigned char>(c)) ||
                    (subtag && std::isdigit(static_cast<unsigned char>(c)));
    if (!ok) return false;
    ++run;
  }
  return run > 0;
}

}  // namespace

std::string normalize_answer(std::string_view answer) {
  std::string s = trim(answer);
  std::string_view v = s;
  if (v.size() >= 2 && v.front() == '"') {
    const auto close = v.rfind('"');
    if (close > 0) {
      const std::string_view rest = v.substr(close + 1);
      if (rest.empty() || (rest.front() == '@' && is_lang_tag(rest.substr(1)))) v = v.substr(1, close - 1);
    }
  }
  std::string out;
  bool space = false;
  for (char c : v) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string> normalized_answers(const std::vector<std::string>& answers) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& a : answers) {
    auto n = normalize_answer(a);
    if (seen.insert(n).second) out.push_back(std::move(n));
  }
  return out;
}

SetScores set_f1(const std::vector<std::string>& gold, const std::vector<std::string>& predicted) {
  const auto g = normalized_answers(gold);
  const auto p = normalized_answers(predicted);
  if (g.empty() && p.empty()) return {1.0, 1.0, 1.0};
  if (g.empty() || p.empty()) return {0.0, 0.0, 0.0};
  const std::set<std::string> gs(g.begin(), g.end());
  std::size_t hit = 0;
  for (const auto& x : p) hit += gs.count(x);
  SetScores s;
  s.precision = static_cast<double>(hit) / static_cast<double>(p.size());
  s.recall = static_cast<double>(hit) / static_cast<double>(g.size());
  s.f1 = s.precision + s.recall == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

int exact_set_accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& predicted) {
  const auto g = normalized_answers(gold);
  const auto p = normalized_answers(predicted);
  return std::set<std::string>(g.begin(), g.end()) == std::set<std::string>(p.begin(), p.end()) ? 1 : 0;
}

int exact_match(const std::vector<std::string>& gold, const std::vector<std::string>& predicted, EmRule rule) {
  const auto g = normalized_answers(gold);
  const std::set<std::string> gs(g.begin(), g.end());
  if (predicted.empty()) return 0;
  if (rule == EmRule::FirstPredicted) return gs.count(normalize_answer(predicted.front())) ? 1 : 0;
  for (const auto& p : predicted)
    if (gs.count(normalize_answer(p))) return 1;
  return 0;
}

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  // reject the top partial bucket so every residue is equally likely
  const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % n + 1) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x <= limit) return x % n;
  }
}

double rhits_at_1(const std::vector<std::string>& gold, const std::vector<std::string>& predicted,
                  std::size_t trials, std::uint64_t seed) {
  const auto p = normalized_answers(predicted);
  if (p.empty() || trials == 0) return 0.0;
  const auto g = normalized_answers(gold);
  const std::set<std::string> gs(g.begin(), g.end());
  std::mt19937_64 rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) hits += gs.count(p[bounded_draw(rng, p.size())]);
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double expected_hits_at_1(const std::vector<std::string>& gold, const std::vector<std::string>& predicted) {
  const auto p = normalized_answers(predicted);
  if (p.empty()) return 0.0;
  const auto g = normalized_answers(gold);
  const std::set<std::string> gs(g.begin(), g.end());
  std::size_t hit = 0;
  for (const auto& x : p) hit += gs.count(x);
  return static_cast<double>(hit) / static_cast<double>(p.size());
}

}  // namespace ikbqa
