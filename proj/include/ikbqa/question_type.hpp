#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace ikbqa {

enum class Dataset { WebQSP, CWQ, KQAPro, MetaQA };

std::string_view dataset_name(Dataset dataset);
/// Case-insensitive; throws std::invalid_argument on unknown names.
Dataset parse_dataset(std::string_view text);
const std::vector<Dataset>& all_datasets();

/// Closed label set per dataset, in canonical order.
const std::vector<std::string>& labels_for(Dataset dataset);

struct QuestionType {
  Dataset dataset = Dataset::CWQ;
  std::string label;

  friend bool operator==(const QuestionType&, const QuestionType&) = default;
  friend auto operator<=>(const QuestionType&, const QuestionType&) = default;
};

/// Throws std::invalid_argument when the label is not in the dataset's set.
QuestionType make_question_type(Dataset dataset, std::string_view label);
/// "CWQ/Superlative"
std::string to_string(const QuestionType& type);
QuestionType parse_question_type(std::string_view text);

}  // namespace ikbqa
