#include "ikbqa/question_type.hpp"

#include <algorithm>
#include <stdexcept>

#include "ikbqa/text.hpp"

namespace ikbqa {

std::string_view dataset_name(Dataset dataset) {
  switch (dataset) {
    case Dataset::WebQSP: return "WebQSP";
    case Dataset::CWQ: return "CWQ";
    case Dataset::KQAPro: return "KQAPro";
    case Dataset::MetaQA: return "MetaQA";
  }
  return "CWQ";
}

const std::vector<Dataset>& all_datasets() {
  static const std::vector<Dataset> all = {Dataset::WebQSP, Dataset::CWQ, Dataset::KQAPro, Dataset::MetaQA};
  return all;
}

Dataset parse_dataset(std::string_view text) {
  const auto lower = ascii_lower(text);
  for (auto d : all_datasets())
    if (ascii_lower(dataset_name(d)) == lower) return d;
  throw std::invalid_argument("unknown dataset: " + std::string(text));
}

const std::vector<std::string>& labels_for(Dataset dataset) {
  static const std::vector<std::string> webqsp = {"1-hop", "2-hop"};
  static const std::vector<std::string> cwq = {"Conjunction", "Composition", "Comparative", "Superlative"};
  static const std::vector<std::string> kqapro = {"Ct", "QA", "QAQ", "QN", "QR", "QRQ", "SA", "SB", "Vf"};
  static const std::vector<std::string> metaqa = {"1-hop", "2-hop", "3-hop"};
  switch (dataset) {
    case Dataset::WebQSP: return webqsp;
    case Dataset::CWQ: return cwq;
    case Dataset::KQAPro: return kqapro;
    case Dataset::MetaQA: return metaqa;
  }
  return cwq;
}

QuestionType make_question_type(Dataset dataset, std::string_view label) {
  const auto& labels = labels_for(dataset);
  if (std::find(labels.begin(), labels.end(), label) == labels.end())
    throw std::invalid_argument("label " + std::string(label) + " is not a " + std::string(dataset_name(dataset)) +
                                " question type");
  return {dataset, std::string(label)};
}

std::string to_string(const QuestionType& type) {
  return std::string(dataset_name(type.dataset)) + "/" + type.label;
}

QuestionType parse_question_type(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw std::invalid_argument("question type must look like Dataset/Label");
  return make_question_type(parse_dataset(text.substr(0, slash)), text.substr(slash + 1));
}

}  // namespace ikbqa
