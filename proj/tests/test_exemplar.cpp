#include <gtest/gtest.h>

#include <map>
#include <random>

#include "fixtures.hpp"
#include "ikbqa/classifier.hpp"
#include "ikbqa/dialogue.hpp"
#include "ikbqa/exemplar.hpp"

using namespace ikbqa;

namespace {

std::filesystem::path exemplar_dir(const char* dataset) { return fixtures::data_dir() / "exemplars" / dataset; }

ExemplarStore store_for(const char* dataset) {
  ExemplarStore store;
  store.load_directory(exemplar_dir(dataset));
  return store;
}

QuestionType cwq(const char* label) { return make_question_type(Dataset::CWQ, label); }

}  // namespace

TEST(QuestionType, ClosedLabelSets) {
  EXPECT_EQ(labels_for(Dataset::WebQSP), (std::vector<std::string>{"1-hop", "2-hop"}));
  EXPECT_EQ(labels_for(Dataset::CWQ), (std::vector<std::string>{"Conjunction", "Composition", "Comparative", "Superlative"}));
  EXPECT_EQ(labels_for(Dataset::KQAPro),
            (std::vector<std::string>{"Ct", "QA", "QAQ", "QN", "QR", "QRQ", "SA", "SB", "Vf"}));
  EXPECT_EQ(labels_for(Dataset::MetaQA), (std::vector<std::string>{"1-hop", "2-hop", "3-hop"}));
  EXPECT_THROW(make_question_type(Dataset::CWQ, "1-hop"), std::invalid_argument);
  EXPECT_EQ(parse_question_type("CWQ/Superlative"), cwq("Superlative"));
  EXPECT_EQ(to_string(make_question_type(Dataset::KQAPro, "QAQ")), "KQAPro/QAQ");
}

TEST(ExemplarFile, RoundTrip) {
  const auto original = load_exemplar_file(exemplar_dir("CWQ") / "Superlative.jsonl");
  ASSERT_EQ(original.size(), 2u);
  fixtures::TempDir dir;
  write_exemplar_file(dir / "Superlative.jsonl", original);
  EXPECT_EQ(load_exemplar_file(dir / "Superlative.jsonl"), original);
  for (const auto& ex : original) EXPECT_NO_THROW(validate_exemplar(ex));
}

TEST(ExemplarFile, RejectsInvalidExemplar) {
  Exemplar bad{cwq("Conjunction"), "q", {{"", "SearchNodes(\"x\")", ""}}};
  EXPECT_THROW(validate_exemplar(bad), ExemplarError);
  bad.turns = {{"", "Done", ""}, {"", "Done", ""}};
  EXPECT_THROW(validate_exemplar(bad), ExemplarError);
  fixtures::TempDir dir;
  EXPECT_THROW(write_exemplar_file(dir / "x.jsonl", {bad}), ExemplarError);
}

TEST(ExemplarStore, SelectFirstShotsOfType) {
  const auto store = store_for("CWQ");
  const auto stored = load_exemplar_file(exemplar_dir("CWQ") / "Superlative.jsonl");
  const auto sel = store.select(cwq("Superlative"), 2);
  EXPECT_EQ(sel.exemplars, stored);
  EXPECT_TRUE(sel.warning.empty());
  const auto one = store.select(cwq("Superlative"), 1);
  ASSERT_EQ(one.exemplars.size(), 1u);
  EXPECT_EQ(one.exemplars[0], stored[0]);
}

TEST(ExemplarStore, ZeroShots) {
  const auto sel = store_for("CWQ").select(cwq("Comparative"), 0);
  EXPECT_TRUE(sel.exemplars.empty());
  EXPECT_TRUE(sel.warning.empty());
}

TEST(ExemplarStore, WebQspAllShots) {
  const auto store = store_for("WebQSP");
  const auto sel = store.select(make_question_type(Dataset::WebQSP, "1-hop"), kAllShots);
  EXPECT_EQ(sel.exemplars.size(), 4u);
  EXPECT_EQ(store.size(), 4u);
}

TEST(ExemplarStore, FallbackWithWarning) {
  const auto store = store_for("KQAPro");
  const auto fallback = make_question_type(Dataset::KQAPro, "Ct");
  const auto sel = store.select(make_question_type(Dataset::KQAPro, "Vf"), 2, &fallback);
  EXPECT_EQ(sel.exemplars, store.select(fallback, 2).exemplars);
  EXPECT_FALSE(sel.warning.empty());
}

TEST(ExemplarStore, LengthIsMinOfShotsAndAvailable) {
  ExemplarStore store;
  for (int i = 0; i < 3; ++i)
    store.add({cwq("Composition"), "q" + std::to_string(i), {{"", "Done", ""}}});
  for (std::size_t shots = 0; shots < 6; ++shots) {
    const auto sel = store.select(cwq("Composition"), shots, nullptr);
    EXPECT_EQ(sel.exemplars.size(), std::min<std::size_t>(shots, 3));
    for (std::size_t i = 0; i < sel.exemplars.size(); ++i) EXPECT_EQ(sel.exemplars[i].question, "q" + std::to_string(i));
  }
}

// Every stored exemplar, executed against its reference KB, reproduces the
// recorded observations byte for byte.
TEST(ExemplarStore, StoredExemplarsReplayCleanly) {
  const std::map<std::string, fixtures::ToyKb*> kbs = {
      {"CWQ", &fixtures::freebase_toy()}, {"WebQSP", &fixtures::freebase_toy()}, {"KQAPro", &fixtures::wikidata_toy()}};
  std::size_t checked = 0;
  for (const auto& [dataset, toy] : kbs) {
    DialogueEngine engine(*toy->tools);
    for (const auto& entry : std::filesystem::directory_iterator(exemplar_dir(dataset.c_str()))) {
      for (const auto& ex : load_exemplar_file(entry.path())) {
        for (const auto& t : ex.turns) {
          const auto action = parse_action(t.actionText);
          ASSERT_TRUE(action.ok()) << t.actionText;
          if (action.action->kind == ActionKind::Done) continue;
          EXPECT_EQ(engine.execute(*action.action).text, t.observationText) << ex.question << "\n" << t.actionText;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 40u);
}

TEST(Classifier, LeaveOneOutOnCwqSet) {
  const auto rows = load_labeled_questions(fixtures::data_dir() / "classifier" / "CWQ.jsonl");
  ASSERT_EQ(rows.size(), 200u);
  std::size_t correct = 0;
  std::map<std::string, std::size_t> perLabel;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto rest = rows;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    const auto clf = CentroidClassifier::train(Dataset::CWQ, rest);
    if (clf.predict(rows[i].first).label == rows[i].second) {
      ++correct;
      ++perLabel[rows[i].second];
    }
  }
  const double accuracy = static_cast<double>(correct) / rows.size();
  EXPECT_GE(accuracy, 0.9) << correct << "/" << rows.size();
  for (const auto& label : labels_for(Dataset::CWQ)) EXPECT_GE(perLabel[label], 40u) << label;
}

TEST(Classifier, SuperlativePhrasing) {
  const auto clf = CentroidClassifier::train(Dataset::CWQ, load_labeled_questions(fixtures::data_dir() / "classifier" / "CWQ.jsonl"));
  EXPECT_EQ(clf.predict("Which country bordering France has the most people?").label, "Superlative");
  EXPECT_EQ(clf.predict("Which film directed by Ron Howard was released the most recently?").label, "Superlative");
}

TEST(Classifier, SingleLabelIsConstant) {
  const auto clf = CentroidClassifier::train(Dataset::CWQ, {{"what is a", "Composition"}, {"what is b", "Composition"}});
  EXPECT_FALSE(clf.warning().empty());
  for (const char* q : {"", "the most populous", "zzz", "what is a"}) EXPECT_EQ(clf.predict(q).label, "Composition");
}

TEST(Classifier, Errors) {
  EXPECT_THROW(CentroidClassifier::train(Dataset::CWQ, {}), std::invalid_argument);
  EXPECT_THROW(CentroidClassifier::train(Dataset::CWQ, {{"q", "Ct"}}), std::invalid_argument);
}

TEST(Classifier, Deterministic) {
  const auto rows = load_labeled_questions(fixtures::data_dir() / "classifier" / "KQAPro.jsonl");
  const auto a = CentroidClassifier::train(Dataset::KQAPro, rows);
  const auto b = CentroidClassifier::train(Dataset::KQAPro, rows);
  EXPECT_EQ(a.labels(), b.labels());
  EXPECT_EQ(a.centroids(), b.centroids());
}

TEST(Classifier, TotalOverStrings) {
  const auto clf = CentroidClassifier::train(Dataset::KQAPro, load_labeled_questions(fixtures::data_dir() / "classifier" / "KQAPro.jsonl"));
  const auto& labels = labels_for(Dataset::KQAPro);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    std::string q;
    const int len = rng() % 40;
    for (int j = 0; j < len; ++j) q += static_cast<char>(rng() % 256);
    const auto t = clf.predict(q);
    EXPECT_EQ(t.dataset, Dataset::KQAPro);
    EXPECT_NE(std::find(labels.begin(), labels.end(), t.label), labels.end());
  }
}
