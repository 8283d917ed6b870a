#pragma once

// Data-parallel scoring loops shared by the retrieval tools. Each kernel has
// an OpenMP version and a serial reference; tests hold them bit-identical and
// bench/ compares their throughput.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ikbqa {

/// Sparse real vector of a fixed logical dimension; entries sorted by index
/// with no duplicates.
struct SparseVector {
  std::uint32_t dimension = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  static SparseVector from_dense(const std::vector<double>& dense);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

double dot(const SparseVector& a, const SparseVector& b);
double l2_norm(const SparseVector& v);
/// 0 when either vector is zero.
double cosine(const SparseVector& a, const SparseVector& b);

std::vector<double> cosine_batch(const SparseVector& query, std::span<const SparseVector> candidates);
std::vector<double> cosine_batch_serial(const SparseVector& query, std::span<const SparseVector> candidates);

struct NameEntry {
  std::uint32_t node = 0;
  std::string iri;
  std::string name;
  std::string normalized;
  std::vector<std::string> tokens;  // sorted, unique
};

struct NameQuery {
  std::string normalized;
  std::vector<std::string> tokens;  // sorted, unique
};

NameQuery make_name_query(std::string_view text);

/// 3·exact + 2·prefix + Jaccard(tokens) on normalized forms.
double name_score(const NameQuery& query, const NameEntry& entry);

std::vector<double> score_names(const NameQuery& query, std::span<const NameEntry> entries);
std::vector<double> score_names_serial(const NameQuery& query, std::span<const NameEntry> entries);

}  // namespace ikbqa
