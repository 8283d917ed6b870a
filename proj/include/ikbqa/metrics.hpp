#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace ikbqa {

/// Lowercase, trim, collapse internal whitespace and unwrap a quoted
/// literal with a language tag ("\"Paris\"@en" -> "paris").
std::string normalize_answer(std::string_view answer);

/// Normalised answers, deduplicated, in first-occurrence order.
std::vector<std::string> normalized_answers(const std::vector<std::string>& answers);

struct SetScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Both empty -> (1,1,1); exactly one empty -> (0,0,0).
SetScores set_f1(const std::vector<std::string>& gold, const std::vector<std::string>& predicted);

/// 1 iff the normalised sets are equal.
int exact_set_accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& predicted);

enum class EmRule { FirstPredicted, AnyPredicted };

/// FirstPredicted: the first predicted answer is in gold. AnyPredicted: some
/// predicted answer is.
int exact_match(const std::vector<std::string>& gold, const std::vector<std::string>& predicted,
                EmRule rule = EmRule::FirstPredicted);

/// Mean Hits@1 over `trials` uniform draws from the predicted set, seeded.
double rhits_at_1(const std::vector<std::string>& gold, const std::vector<std::string>& predicted,
                  std::size_t trials = 100, std::uint64_t seed = 0);

/// |gold ∩ predicted| / |predicted|, the expectation of rhits_at_1.
double expected_hits_at_1(const std::vector<std::string>& gold, const std::vector<std::string>& predicted);

/// Uniform integer in [0, n) by rejection sampling; identical on every
/// platform for a given engine state.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n);

}  // namespace ikbqa
