#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "mlqa/error.h"
#include "mlqa/translation.h"
#include "oracles.h"

namespace mlqa {
namespace {

using testing::Weights;

AlignedPair aligned(const std::string& src, const std::string& tgt,
                    std::vector<AlignmentLink> links) {
  return {split_whitespace(src), split_whitespace(tgt), std::move(links)};
}

GrammarRule rule(const std::string& src, const std::string& tgt,
                 std::vector<AlignmentLink> links, double l) {
  return {split_whitespace(src), split_whitespace(tgt), std::move(links), l};
}

TEST(Distribution, RejectsBadEntries) {
  EXPECT_THROW(Distribution(Weights{{"a", 0.0}}), Error);
  EXPECT_THROW(Distribution(Weights{{"a", -0.1}}), Error);
  EXPECT_THROW(Distribution(Weights{{"a", 0.7}, {"b", 0.4}}), Error);
  EXPECT_NO_THROW(Distribution(Weights{{"a", 0.7}, {"b", 0.3}}));
  EXPECT_NO_THROW(Distribution(Weights{{"a", 0.5}}));  // deficient is fine
}

TEST(Distribution, NormalizedDropsNonPositive) {
  auto d = Distribution::normalized({{"a", 3.0}, {"b", 1.0}, {"c", 0.0}});
  EXPECT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.probability("a"), 0.75);
  EXPECT_DOUBLE_EQ(d.probability("c"), 0.0);
  EXPECT_TRUE(Distribution::normalized({{"x", 0.0}}).empty());
}

TEST(WordTable, CountsLinksOverOccurrences) {
  AlignedPairCorpus corpus = {
      aligned("the dog", "le t1", {{1, 1}}),
      aligned("dog runs", "t1 court", {{0, 0}}),
      aligned("a dog", "un t1", {{1, 1}}),
      aligned("dog", "t2", {{0, 0}}),
  };
  const TranslationTable table = build_word_table(corpus);
  const Distribution& dog = *table.find("dog");
  EXPECT_DOUBLE_EQ(dog.probability("t1"), 0.75);
  EXPECT_DOUBLE_EQ(dog.probability("t2"), 0.25);
  EXPECT_EQ(dog.size(), 2u);
}

TEST(WordTable, UnlinkedWordHasEmptyRow) {
  AlignedPairCorpus corpus = {aligned("ghost x", "y z", {{1, 1}}),
                              aligned("ghost", "w", {})};
  const TranslationTable table = build_word_table(corpus);
  ASSERT_NE(table.find("ghost"), nullptr);
  EXPECT_TRUE(table.find("ghost")->empty());
}

TEST(WordTable, PartiallyAlignedWordIsDeficient) {
  AlignedPairCorpus corpus = {aligned("w", "a", {{0, 0}}), aligned("w", "b", {})};
  EXPECT_DOUBLE_EQ(build_word_table(corpus).find("w")->total(), 0.5);
}

TEST(WordTable, RejectsLinksOutOfRange) {
  AlignedPairCorpus corpus = {aligned("a b", "c", {{1, 1}})};
  EXPECT_THROW(build_word_table(corpus), Error);
}

// Straight from the definition: k counts each link of an occurrence as
// 1/(links of that occurrence), m counts occurrences.
TEST(GrammarTable, SingleRuleNormalizesToOne) {
  std::vector<GrammarRule> rules = {rule("child", "X", {{0, 0}}, 0.5)};
  auto q = build_grammar_table(rules, {"child"});
  EXPECT_DOUBLE_EQ(q.distributions[0].probability("X"), 1.0);
}

TEST(GrammarTable, LikelihoodsAccumulateThenNormalize) {
  std::vector<GrammarRule> rules = {rule("child", "X", {{0, 0}}, 0.3),
                                    rule("child", "Y", {{0, 0}}, 0.1)};
  auto q = build_grammar_table(rules, {"child", "labor"});
  EXPECT_DOUBLE_EQ(q.distributions[0].probability("X"), 0.75);
  EXPECT_DOUBLE_EQ(q.distributions[0].probability("Y"), 0.25);
  EXPECT_TRUE(q.distributions[1].empty());
}

TEST(GrammarTable, PhraseRuleContributesPerLink) {
  std::vector<GrammarRule> rules = {rule("child", "X", {{0, 0}}, 0.3),
                                    rule("child", "Y", {{0, 0}}, 0.1),
                                    rule("child labor", "A B", {{0, 0}, {1, 1}}, 0.2)};
  auto q = build_grammar_table(rules, {"child", "labor"});
  EXPECT_NEAR(q.distributions[0].probability("X"), 0.3 / 0.6, 1e-15);
  EXPECT_NEAR(q.distributions[0].probability("Y"), 0.1 / 0.6, 1e-15);
  EXPECT_NEAR(q.distributions[0].probability("A"), 0.2 / 0.6, 1e-15);
  EXPECT_DOUBLE_EQ(q.distributions[1].probability("B"), 1.0);
}

TEST(NBestTable, UniformCountsOverDerivations) {
  std::vector<NBestDerivation> ds;
  for (int r = 1; r <= 10; ++r) {
    ds.push_back({r, {rule("labor", r <= 6 ? "A" : "B", {{0, 0}}, 0.01 * r),
                      rule("africa", "C", {{0, 0}}, 0.9)}});
  }
  auto q = build_nbest_table(ds, {"labor", "africa"});
  EXPECT_DOUBLE_EQ(q.distributions[0].probability("A"), 0.6);
  EXPECT_DOUBLE_EQ(q.distributions[0].probability("B"), 0.4);
  EXPECT_DOUBLE_EQ(q.distributions[1].probability("C"), 1.0);
}

TEST(NBestTable, DuplicateRankIsAnError) {
  std::vector<NBestDerivation> ds = {{1, {rule("a", "b", {{0, 0}}, 1)}},
                                     {1, {rule("a", "c", {{0, 0}}, 1)}}};
  EXPECT_THROW(build_nbest_table(ds, {"a"}), Error);
}

TEST(WordTable, MatchesBruteForceOracle) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto corpus = testing::random_aligned_corpus(rng);
    ASSERT_EQ(build_word_table(corpus).rows(), testing::word_table_oracle(corpus).rows())
        << "trial " << trial;
  }
}

TEST(GrammarTable, MatchesBruteForceOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rules = testing::random_rules(rng);
    Tokens terms = {testing::random_word(rng, 4), testing::random_word(rng, 4)};
    ASSERT_EQ(build_grammar_table(rules, terms), testing::grammar_oracle(rules, terms))
        << "trial " << trial;
  }
}

TEST(NBestTable, MatchesBruteForceOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ds = testing::random_derivations(rng);
    Tokens terms = {testing::random_word(rng, 4), testing::random_word(rng, 4)};
    ASSERT_EQ(build_nbest_table(ds, terms), testing::nbest_oracle(ds, terms))
        << "trial " << trial;
  }
}

TEST(Lookup, KnownOovAndEmptyTable) {
  TranslationTable table({{"child", Distribution(Weights{{"nino", 0.8}})}});
  auto q = lookup_query(table, {"child", "zzz"});
  EXPECT_DOUBLE_EQ(q.distributions[0].probability("nino"), 0.8);
  EXPECT_TRUE(q.distributions[1].empty());
  for (const auto& d : lookup_query(TranslationTable(), {"a", "b"}).distributions) {
    EXPECT_TRUE(d.empty());
  }
}

TEST(MaskContexts, EveryNonemptySubsetWhenAffordable) {
  const Tokens s = split_whitespace("fue un placer conocerte y");
  auto samples = mask_contexts(s, 2, 2, 1000, 1);
  EXPECT_EQ(samples.size(), 15u);  // four context positions
  std::set<Tokens> distinct(samples.begin(), samples.end());
  EXPECT_EQ(distinct.size(), 15u);
  EXPECT_TRUE(distinct.count(split_whitespace("fue un placer <F> y")));
  for (const Tokens& t : samples) EXPECT_EQ(t[2], "placer");
}

TEST(MaskContexts, TwoPositionsGiveThreeSamples) {
  const Tokens s = {"a", "b", "c"};
  auto samples = mask_contexts(s, 1, 1, 10, 0);
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_EQ(samples[0], (Tokens{"<F>", "b", "c"}));
  EXPECT_EQ(samples[1], (Tokens{"a", "b", "<F>"}));
  EXPECT_EQ(samples[2], (Tokens{"<F>", "b", "<F>"}));
}

TEST(MaskContexts, WindowZeroIsEmpty) {
  EXPECT_TRUE(mask_contexts({"a", "b", "c"}, 1, 0, 10, 0).empty());
  EXPECT_TRUE(mask_contexts({"solo"}, 0, 3, 10, 0).empty());
}

TEST(MaskContexts, SampledSubsetsAreDistinctAndSeeded) {
  Tokens s;
  for (int i = 0; i < 21; ++i) s.push_back("w" + std::to_string(i));
  auto a = mask_contexts(s, 10, 10, 50, 4);
  auto b = mask_contexts(s, 10, 10, 50, 4);
  auto c = mask_contexts(s, 10, 10, 50, 5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(std::set<Tokens>(a.begin(), a.end()).size(), 50u);
  for (const Tokens& t : a) {
    EXPECT_EQ(t[10], "w10");
    EXPECT_NE(t, s);
  }
}

TEST(MaskContexts, FocusOutOfRange) {
  EXPECT_THROW(mask_contexts({"a"}, 1, 1, 1, 0), Error);
}

TEST(TableFile, RoundTripAndErrors) {
  TranslationTable table({{"a", Distribution(Weights{{"x", 0.25}, {"y", 0.75}})},
                          {"b", Distribution(Weights{{"z", 1.0 / 3.0}})}});
  std::stringstream buf;
  write_table(buf, table);
  EXPECT_EQ(read_table(buf, "t").rows(), table.rows());

  std::istringstream dup("a\tx\t0.5\na\tx\t0.2\n");
  EXPECT_THROW(read_table(dup, "dup"), ParseError);
  std::istringstream over("a\tx\t0.7\na\ty\t0.7\n");
  EXPECT_THROW(read_table(over, "over"), Error);
  std::istringstream short_line("a\tx\n");
  try {
    read_table(short_line, "short");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(GrammarFile, ParseAndFormat) {
  GrammarRule r = parse_grammar_rule("child labor ||| A B ||| 1-1 0-0 ||| 0.2");
  EXPECT_EQ(r.source, (Tokens{"child", "labor"}));
  EXPECT_EQ(r.alignments, (std::vector<AlignmentLink>{{0, 0}, {1, 1}}));
  EXPECT_DOUBLE_EQ(r.likelihood, 0.2);
  EXPECT_EQ(format_grammar_rule(r), "child labor ||| A B ||| 0-0 1-1 ||| 0.2");
  EXPECT_THROW(parse_grammar_rule("a ||| b ||| 0-3 ||| 1"), Error);
  EXPECT_THROW(parse_grammar_rule("a ||| b ||| 0-0"), Error);
  EXPECT_THROW(parse_grammar_rule("a ||| b ||| 0-0 ||| -1"), Error);
}

TEST(NBestFile, GroupsByQuestionAndRank) {
  std::istringstream in(
      "q1\t2\tlabor ||| B ||| 0-0 ||| 0.1\n"
      "q1\t1\tlabor ||| A ||| 0-0 ||| 0.3\n"
      "q1\t1\tafrica ||| C ||| 0-0 ||| 0.3\n"
      "q2\t1\tx ||| y ||| 0-0 ||| 1\n");
  NBestLists lists = read_nbest(in, "n");
  ASSERT_EQ(lists.size(), 2u);
  ASSERT_EQ(lists["q1"].size(), 2u);
  EXPECT_EQ(lists["q1"][0].rank, 1);
  EXPECT_EQ(lists["q1"][0].rules.size(), 2u);
  std::stringstream again;
  write_nbest(again, lists);
  EXPECT_EQ(read_nbest(again, "again")["q1"][1].rules[0].target, Tokens{"B"});

  std::istringstream bad("q1\t11\ta ||| b ||| 0-0 ||| 1\n");
  EXPECT_THROW(read_nbest(bad, "bad"), ParseError);
}

TEST(AlignedFile, RoundTrip) {
  AlignedPairCorpus corpus = {aligned("a b", "x y z", {{0, 0}, {1, 2}}),
                              aligned("c", "w", {})};
  std::stringstream buf;
  write_aligned_corpus(buf, corpus);
  auto back = read_aligned_corpus(buf, "a");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].links, corpus[0].links);
  EXPECT_EQ(back[1].target, Tokens{"w"});
  EXPECT_TRUE(back[1].links.empty());
}

TEST(QueryFile, OovRowsAreMarked) {
  std::ostringstream out;
  write_query(out, "q1", lookup_query(TranslationTable(), {"zzz"}));
  EXPECT_EQ(out.str(), "q1\t0\tzzz\t-\t0\n");
}

}  // namespace
}  // namespace mlqa
