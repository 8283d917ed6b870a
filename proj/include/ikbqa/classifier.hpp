#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ikbqa/kernels.hpp"
#include "ikbqa/question_type.hpp"
#include "ikbqa/similarity.hpp"

namespace ikbqa {

class QuestionClassifier {
 public:
  virtual ~QuestionClassifier() = default;
  /// Always returns a label of the classifier's dataset.
  virtual QuestionType predict(std::string_view question) const = 0;
};

/// Nearest-centroid classifier over trigram TF-IDF question vectors. Each
/// centroid is the mean of the L2-normalised training vectors of a label.
class CentroidClassifier final : public QuestionClassifier {
 public:
  /// Needs at least one example. With a single label the result is a
  /// constant classifier and `warning()` says so. Throws
  /// std::invalid_argument on labels outside the dataset.
  static CentroidClassifier train(Dataset dataset, const std::vector<std::pair<std::string, std::string>>& examples);

  QuestionType predict(std::string_view question) const override;
  /// Cosine to every centroid, in label order.
  std::vector<std::pair<std::string, double>> scores(std::string_view question) const;

  Dataset dataset() const { return dataset_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<SparseVector>& centroids() const { return centroids_; }
  const std::string& warning() const { return warning_; }

 private:
  CentroidClassifier(Dataset dataset, std::vector<std::string> questions);

  Dataset dataset_;
  TrigramTfidfRanker ranker_;
  std::vector<std::string> labels_;
  std::vector<SparseVector> centroids_;
  std::string warning_;
};

/// JSONL rows {"question": ..., "label": ...}
std::vector<std::pair<std::string, std::string>> load_labeled_questions(const std::filesystem::path& path);

}  // namespace ikbqa
