#include <gtest/gtest.h>

#include <chrono>

#include "ikbqa/evaluator.hpp"
#include "sparql_oracle.hpp"

using namespace ikbqa;

// Randomized equivalence against the brute-force reference: KBs up to 200
// triples, up to three patterns and one filter.
TEST(SparqlOracle, RandomCasesMatchBruteForce) {
  const auto start = std::chrono::steady_clock::now();
  oracle::Generator gen(20240607);
  std::size_t nonEmpty = 0;
  const int cases = 600;
  for (int i = 0; i < cases; ++i) {
    const auto c = gen.next();
    const auto text = oracle::to_text(c.query);
    const auto kb = KnowledgeBase::from_triples(c.triples, KbSchema::defaults(SchemaProfile::PlainRdf));
    auto table = evaluate(kb, parse_sparql(text), {1u << 30, ~0ull});
    std::sort(table.rows.begin(), table.rows.end());
    const auto expected = oracle::enumerate(c.triples, c.query);
    ASSERT_EQ(table.rows, expected) << "case " << i << ": " << text;
    if (!expected.empty() && !(c.query.count && expected[0][0].value() == "0")) ++nonEmpty;
  }
  // The generator must exercise real joins, not just empty results.
  EXPECT_GT(nonEmpty, static_cast<std::size_t>(cases / 3));
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(60));
}
