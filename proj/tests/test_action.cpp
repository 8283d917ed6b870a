#include <gtest/gtest.h>

#include <random>

#include "ikbqa/action.hpp"

using namespace ikbqa;

namespace {

Action parsed(std::string_view text) {
  const auto r = parse_action(text);
  EXPECT_TRUE(r.ok()) << text << " -> " << r.error;
  return r.action.value_or(Action{});
}

std::string error_of(std::string_view text) {
  const auto r = parse_action(text);
  EXPECT_FALSE(r.ok()) << text;
  return r.error;
}

std::string random_arg(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "a", "Z", " ", "\"", "'", "\\", "\n", "\t", "\r", "?e", "{", "}", "é", "東京", "🎬", "'''", "\"\"\"", "\\n",
      ")", "(", ",", "=", "\x01", "\x7f", "SELECT ?e WHERE { ?e type.object.name \"Tom Hanks\"@en . }"};
  std::string s;
  const int n = rng() % 12;
  for (int i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

}  // namespace

TEST(ParseAction, SearchNodes) {
  EXPECT_EQ(parsed("SearchNodes(\"Tom Hanks\")"), Action::search_nodes("Tom Hanks"));
  EXPECT_EQ(parsed("  SearchNodes( 'Tom Hanks' )  "), Action::search_nodes("Tom Hanks"));
  EXPECT_EQ(parsed("SearchNodes(name=\"Tom Hanks\")"), Action::search_nodes("Tom Hanks"));
}

TEST(ParseAction, NestedQuotesSurvive) {
  const auto a = parsed(
      "SearchGraphPatterns('SELECT ?e WHERE {?e type.object.name \"Tom Hanks\"@en .}', semantic=\"play in film\")");
  EXPECT_EQ(a, Action::search_graph_patterns("SELECT ?e WHERE {?e type.object.name \"Tom Hanks\"@en .}", "play in film"));
  EXPECT_EQ(parsed("SearchGraphPatterns(\"q\", \"s\")"), Action::search_graph_patterns("q", "s"));
  EXPECT_EQ(parsed("SearchGraphPatterns(semantic='s', sparql='q')"), Action::search_graph_patterns("q", "s"));
}

TEST(ParseAction, TripleQuotesAndEscapes) {
  EXPECT_EQ(parsed("ExecuteSPARQL('''SELECT ?x WHERE {\n ?x p \"it's\" .\n}''')"),
            Action::execute_sparql("SELECT ?x WHERE {\n ?x p \"it's\" .\n}"));
  EXPECT_EQ(parsed("SearchNodes(\"a\\\"b\\\\c\\nd\\u00e9\")"), Action::search_nodes("a\"b\\c\nd\xC3\xA9"));
  EXPECT_EQ(parsed("SearchNodes('keep \\d')"), Action::search_nodes("keep \\d"));
}

TEST(ParseAction, Done) {
  EXPECT_EQ(parsed("Done"), Action::done());
  EXPECT_EQ(parsed("Done()"), Action::done());
  EXPECT_EQ(parsed(" Done \n"), Action::done());
}

TEST(ParseAction, Errors) {
  EXPECT_EQ(error_of("Foo()"), "unknown tool Foo");
  EXPECT_EQ(error_of("Foo("), "malformed string literal at offset 4");
  EXPECT_EQ(error_of("SearchNodes(\"abc)"), "malformed string literal at offset 12");
  EXPECT_EQ(error_of("SearchNodes()"), "tool SearchNodes expects (name)");
  EXPECT_EQ(error_of("SearchNodes(\"a\", \"b\")"), "tool SearchNodes expects (name)");
  EXPECT_EQ(error_of("SearchGraphPatterns(\"q\")"), "tool SearchGraphPatterns expects (sparql, semantic)");
  EXPECT_EQ(error_of("SearchGraphPatterns(\"q\", semantic=\"a\", k=\"3\")"), "unexpected argument k");
  EXPECT_EQ(error_of("SearchNodes"), "tool SearchNodes expects (name)");
  EXPECT_EQ(error_of("Done(\"x\")"), "tool Done expects ()");
  EXPECT_FALSE(parse_action("").ok());
  EXPECT_FALSE(parse_action("SearchNodes(\"a\") trailing").ok());
  EXPECT_FALSE(parse_action("SearchNodes(42)").ok());
}

TEST(ParseAction, NeverThrows) {
  std::mt19937_64 rng(4);
  const std::string alphabet = "SearchNodes()Done'\"\\=,_ \nuxU0123456789abcdefé";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const int len = rng() % 30;
    for (int j = 0; j < len; ++j)
      s += (rng() % 5 == 0) ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()];
    ActionParse r;
    EXPECT_NO_THROW(r = parse_action(s)) << s;
    EXPECT_EQ(r.ok(), r.error.empty()) << s;
  }
}

TEST(SerializeAction, Canonical) {
  EXPECT_EQ(serialize_action(Action::search_nodes("Tom Hanks")), "SearchNodes(\"Tom Hanks\")");
  EXPECT_EQ(serialize_action(Action::search_graph_patterns("q \"x\"", "play in film")),
            "SearchGraphPatterns(\"q \\\"x\\\"\", semantic=\"play in film\")");
  EXPECT_EQ(serialize_action(Action::done()), "Done");
}

TEST(SerializeAction, RoundTrip) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    Action a;
    switch (i % 4) {
      case 0: a = Action::search_nodes(random_arg(rng)); break;
      case 1: a = Action::search_graph_patterns(random_arg(rng), random_arg(rng)); break;
      case 2: a = Action::execute_sparql(random_arg(rng)); break;
      default: a = Action::done(); break;
    }
    const auto text = serialize_action(a);
    const auto r = parse_action(text);
    ASSERT_TRUE(r.ok()) << text << " -> " << r.error;
    EXPECT_EQ(*r.action, a) << text;
  }
}
