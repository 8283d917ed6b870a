#include "ikbqa/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "httplib.h"
#include "ikbqa/sparql_client.hpp"
#include "ikbqa/text.hpp"
#include "json.hpp"

namespace ikbqa {

std::vector<SparseVector> SimilarityRanker::embed_batch(const std::vector<std::string>& texts) const {
  std::vector<SparseVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

TrigramTfidfRanker::TrigramTfidfRanker(const std::vector<std::string>& corpus, std::uint32_t dimension)
    : dimension_(dimension), documents_(corpus.size()) {
  if (dimension_ == 0) throw std::invalid_argument("ranker dimension must be positive");
  for (const auto& doc : corpus) {
    std::set<std::uint32_t> seen;
    for (const auto& g : char_trigrams(doc)) seen.insert(bucket(g));
    for (auto b : seen) ++df_[b];
  }
}

std::uint32_t TrigramTfidfRanker::bucket(std::string_view trigram) const {
  std::uint32_t h = 2166136261u;
  for (char c : trigram) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h % dimension_;
}

double TrigramTfidfRanker::idf(std::string_view trigram) const {
  auto it = df_.find(bucket(trigram));
  const double df = it == df_.end() ? 0.0 : it->second;
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + df)) + 1.0;
}

SparseVector TrigramTfidfRanker::embed(std::string_view text) const {
  std::map<std::uint32_t, double> tf;
  std::map<std::uint32_t, double> weight;
  for (const auto& g : char_trigrams(text)) {
    const auto b = bucket(g);
    tf[b] += 1.0;
    weight.try_emplace(b, idf(g));
  }
  SparseVector v;
  v.dimension = dimension_;
  v.entries.reserve(tf.size());
  for (const auto& [b, count] : tf) v.entries.emplace_back(b, count * weight[b]);
  return v;
}

HttpEmbeddingRanker::HttpEmbeddingRanker(EmbeddingClientConfig config) : config_(std::move(config)) {}

std::vector<SparseVector> HttpEmbeddingRanker::embed_batch(const std::vector<std::string>& texts) const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> missing;
  for (const auto& t : texts)
    if (!cache_.count(t) && std::find(missing.begin(), missing.end(), t) == missing.end())
      missing.push_back(t);
  if (!missing.empty()) {
    const auto url = split_url(config_.baseUrl);
    httplib::Client client(url.schemeHostPort);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    client.set_connection_timeout(secs.count(), 0);
    client.set_read_timeout(std::max<long>(1, static_cast<long>(secs.count())), 0);
    httplib::Headers headers;
    if (const char* key = std::getenv(config_.apiKeyEnv.c_str()))
      headers.emplace("Authorization", std::string("Bearer ") + key);
    const std::string prefix = url.path == "/" ? "" : url.path;
    nlohmann::json body = {{"model", config_.model}, {"input", missing}};
    auto res = client.Post(prefix + config_.path, headers, body.dump(), "application/json");
    if (!res) throw EmbeddingError("embedding request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw EmbeddingError("embedding endpoint returned HTTP " + std::to_string(res->status));
    try {
      const auto doc = nlohmann::json::parse(res->body);
      const auto& data = doc.at("data");
      if (data.size() != missing.size()) throw EmbeddingError("embedding count mismatch");
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto index = data[i].value("index", i);
        auto dense = data[i].at("embedding").get<std::vector<double>>();
        if (dimension_ == 0) dimension_ = static_cast<std::uint32_t>(dense.size());
        if (dense.size() != dimension_) throw EmbeddingError("embedding dimension changed");
        cache_[missing.at(index)] = SparseVector::from_dense(dense);
      }
    } catch (const nlohmann::json::exception& e) {
      throw EmbeddingError(std::string("malformed embedding response: ") + e.what());
    }
  }
  std::vector<SparseVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(cache_.at(t));
  return out;
}

SparseVector HttpEmbeddingRanker::embed(std::string_view text) const {
  return embed_batch({std::string(text)}).front();
}

std::uint32_t HttpEmbeddingRanker::dimension() const {
  std::lock_guard lock(mutex_);
  return dimension_;
}

std::vector<RankedCandidate> rank_by_similarity(const SimilarityRanker& ranker, std::string_view query,
                                                const std::vector<std::pair<std::string, std::string>>& candidates) {
  std::vector<std::string> texts;
  texts.reserve(candidates.size() + 1);
  texts.emplace_back(query);
  for (const auto& c : candidates) texts.push_back(c.second);
  auto vectors = ranker.embed_batch(texts);
  const SparseVector q = std::move(vectors.front());
  const std::span<const SparseVector> cands(vectors.data() + 1, candidates.size());
  const auto scores = cosine_batch(q, cands);

  std::vector<RankedCandidate> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    out.push_back({candidates[i].first, candidates[i].second, scores[i]});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) { return a.score > b.score; });
  return out;
}

std::string predicate_label(std::string_view iri) {
  auto cut = iri.find_last_of("/#");
  std::string_view local = cut == std::string_view::npos ? iri : iri.substr(cut + 1);
  if (local.empty()) local = iri;
  std::string out;
  for (char c : local) out += (c == '.' || c == '_' || c == '-' || c == ':') ? ' ' : c;
  return normalize_name(out);
}

std::vector<std::string> ranker_corpus(const KnowledgeBase& kb) {
  std::set<std::string> docs;
  const auto nameProp = kb.lookup(Term::iri(kb.canonical_iri(kb.schema().nameProperty)));
  for (const auto& t : kb.triple_ids()) {
    docs.insert(predicate_label(kb.term(t.p).value()));
    if (nameProp && t.p == *nameProp && kb.term(t.o).is_literal()) docs.insert(kb.term(t.o).value());
  }
  return {docs.begin(), docs.end()};
}

}  // namespace ikbqa
