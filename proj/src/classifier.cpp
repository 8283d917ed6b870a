#include "ikbqa/classifier.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace ikbqa {

namespace {

std::vector<std::string> questions_of(const std::vector<std::pair<std::string, std::string>>& examples) {
  std::vector<std::string> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.first);
  return out;
}

}  // namespace

CentroidClassifier::CentroidClassifier(Dataset dataset, std::vector<std::string> questions)
    : dataset_(dataset), ranker_(questions) {}

CentroidClassifier CentroidClassifier::train(Dataset dataset,
                                             const std::vector<std::pair<std::string, std::string>>& examples) {
  if (examples.empty()) throw std::invalid_argument("classifier needs at least one training example");
  CentroidClassifier c(dataset, questions_of(examples));

  std::map<std::string, std::map<std::uint32_t, double>> sums;
  std::map<std::string, std::size_t> counts;
  for (const auto& [question, label] : examples) {
    make_question_type(dataset, label);  // validates the label
    const SparseVector v = c.ranker_.embed(question);
    const double norm = l2_norm(v);
    auto& sum = sums[label];
    ++counts[label];
    if (norm == 0.0) continue;
    for (const auto& [i, x] : v.entries) sum[i] += x / norm;
  }
  // canonical label order keeps ties deterministic
  for (const auto& label : labels_for(dataset)) {
    auto it = sums.find(label);
    if (it == sums.end()) continue;
    SparseVector centroid;
    centroid.dimension = c.ranker_.dimension();
    const double n = static_cast<double>(counts[label]);
    for (const auto& [i, x] : it->second) centroid.entries.emplace_back(i, x / n);
    c.labels_.push_back(label);
    c.centroids_.push_back(std::move(centroid));
  }
  if (c.labels_.size() == 1) c.warning_ = "single training label " + c.labels_.front() + ": constant classifier";
  return c;
}

std::vector<std::pair<std::string, double>> CentroidClassifier::scores(std::string_view question) const {
  const SparseVector q = ranker_.embed(question);
  const auto sims = cosine_batch(q, centroids_);
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) out.emplace_back(labels_[i], sims[i]);
  return out;
}

QuestionType CentroidClassifier::predict(std::string_view question) const {
  if (labels_.size() == 1) return {dataset_, labels_.front()};
  const auto s = scores(question);
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i].second > s[best].second) best = i;
  return {dataset_, labels_[best]};
}

std::vector<std::pair<std::string, std::string>> load_labeled_questions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    try {
      const auto row = nlohmann::json::parse(line);
      out.emplace_back(row.at("question").get<std::string>(), row.at("label").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace ikbqa
