#include "ikbqa/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "ikbqa/text.hpp"

namespace ikbqa {

SparseVector SparseVector::from_dense(const std::vector<double>& dense) {
  SparseVector v;
  v.dimension = static_cast<std::uint32_t>(dense.size());
  for (std::uint32_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0) v.entries.emplace_back(i, dense[i]);
  return v;
}

double dot(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() && j != b.entries.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      sum += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return sum;
}

double l2_norm(const SparseVector& v) {
  double sum = 0.0;
  for (const auto& [_, x] : v.entries) sum += x * x;
  return std::sqrt(sum);
}

double cosine(const SparseVector& a, const SparseVector& b) {
  const double na = l2_norm(a), nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

std::vector<double> cosine_batch(const SparseVector& query, std::span<const SparseVector> candidates) {
  std::vector<double> out(candidates.size());
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = cosine(query, candidates[i]);
  return out;
}

std::vector<double> cosine_batch_serial(const SparseVector& query, std::span<const SparseVector> candidates) {
  std::vector<double> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = cosine(query, candidates[i]);
  return out;
}

NameQuery make_name_query(std::string_view text) {
  return {normalize_name(text), token_set(text)};
}

double name_score(const NameQuery& query, const NameEntry& entry) {
  if (query.normalized.empty()) return 0.0;
  const bool exact = entry.normalized == query.normalized;
  const bool prefix = entry.normalized.compare(0, query.normalized.size(), query.normalized) == 0;
  std::size_t common = 0;
  auto i = query.tokens.begin();
  auto j = entry.tokens.begin();
  while (i != query.tokens.end() && j != entry.tokens.end()) {
    const int c = i->compare(*j);
    if (c < 0) {
      ++i;
    } else if (c > 0) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t unionSize = query.tokens.size() + entry.tokens.size() - common;
  const double jaccard = unionSize == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(unionSize);
  return 3.0 * exact + 2.0 * prefix + jaccard;
}

std::vector<double> score_names(const NameQuery& query, std::span<const NameEntry> entries) {
  std::vector<double> out(entries.size());
  const auto n = static_cast<std::ptrdiff_t>(entries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = name_score(query, entries[i]);
  return out;
}

std::vector<double> score_names_serial(const NameQuery& query, std::span<const NameEntry> entries) {
  std::vector<double> out(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) out[i] = name_score(query, entries[i]);
  return out;
}

}  // namespace ikbqa
