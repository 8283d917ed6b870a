#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ikbqa/kernels.hpp"
#include "ikbqa/knowledge_base.hpp"

namespace ikbqa {

/// Maps text to a vector; ranking uses cosine similarity between vectors.
class SimilarityRanker {
 public:
  virtual ~SimilarityRanker() = default;
  virtual SparseVector embed(std::string_view text) const = 0;
  virtual std::vector<SparseVector> embed_batch(const std::vector<std::string>& texts) const;
  virtual std::uint32_t dimension() const = 0;
  virtual std::string identity() const = 0;
};

/// Character-trigram TF-IDF with hashed features. Document frequencies come
/// from the corpus given at construction; unseen trigrams get the maximum IDF.
class TrigramTfidfRanker final : public SimilarityRanker {
 public:
  static constexpr std::uint32_t kDefaultDimension = 1u << 20;

  explicit TrigramTfidfRanker(const std::vector<std::string>& corpus,
                              std::uint32_t dimension = kDefaultDimension);

  SparseVector embed(std::string_view text) const override;
  std::uint32_t dimension() const override { return dimension_; }
  std::string identity() const override { return "trigram-tfidf"; }

  double idf(std::string_view trigram) const;
  std::uint32_t bucket(std::string_view trigram) const;

 private:
  std::uint32_t dimension_;
  std::size_t documents_ = 0;
  std::unordered_map<std::uint32_t, std::uint32_t> df_;
};

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EmbeddingClientConfig {
  std::string baseUrl;  // e.g. http://localhost:8080
  std::string path = "/v1/embeddings";
  std::string model = "text-embedding-ada-002";
  std::string apiKeyEnv = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{10000};
};

/// OpenAI-compatible `/embeddings` client. Calls are serialized and results
/// are memoised per text.
class HttpEmbeddingRanker final : public SimilarityRanker {
 public:
  explicit HttpEmbeddingRanker(EmbeddingClientConfig config);

  SparseVector embed(std::string_view text) const override;
  std::vector<SparseVector> embed_batch(const std::vector<std::string>& texts) const override;
  std::uint32_t dimension() const override;
  std::string identity() const override { return "http:" + config_.model; }

 private:
  EmbeddingClientConfig config_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, SparseVector> cache_;
  mutable std::uint32_t dimension_ = 0;
};

struct RankedCandidate {
  std::string key;
  std::string text;
  double score = 0.0;
};

/// Stable sort of the candidates by non-increasing cosine to the query.
std::vector<RankedCandidate> rank_by_similarity(const SimilarityRanker& ranker, std::string_view query,
                                                const std::vector<std::pair<std::string, std::string>>& candidates);

/// Predicate local name with '.', '_', '-', ':' and '/' turned into spaces.
std::string predicate_label(std::string_view iri);

/// Default ranker corpus: every predicate label plus every node name.
std::vector<std::string> ranker_corpus(const KnowledgeBase& kb);

}  // namespace ikbqa
