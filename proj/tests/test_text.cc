#include <gtest/gtest.h>

#include <sstream>

#include "mlqa/error.h"
#include "mlqa/random.h"
#include "mlqa/text.h"

namespace mlqa {
namespace {

TEST(Text, SplitTabsKeepsEmptyFields) {
  EXPECT_EQ(split_tabs("a\t\tb\t"), (std::vector<std::string>{"a", "", "b", ""}));
  EXPECT_EQ(split_tabs(""), (std::vector<std::string>{""}));
}

TEST(Text, SplitWhitespaceDropsRuns) {
  EXPECT_EQ(split_whitespace("  fue  un\tplacer "),
            (Tokens{"fue", "un", "placer"}));
  EXPECT_TRUE(split_whitespace("   ").empty());
}

TEST(Text, LanguageRoundTrip) {
  for (Language l : kLanguages) EXPECT_EQ(parse_language(to_string(l)), l);
  EXPECT_THROW(parse_language("fr"), Error);
  EXPECT_THROW(parse_language("EN"), Error);
}

TEST(Text, StrictNumbers) {
  EXPECT_DOUBLE_EQ(parse_double("0.25"), 0.25);
  EXPECT_THROW(parse_double("0.25x"), Error);
  EXPECT_THROW(parse_double(""), Error);
  EXPECT_EQ(parse_integer("-12"), -12);
  EXPECT_THROW(parse_integer("3.0"), Error);
  EXPECT_THROW(parse_integer(" 3"), Error);
}

TEST(Text, FormatDoubleRoundTrips) {
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.below(20) - 10.0);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_fixed(0.22666666, 4), "0.2267");
}

TEST(Text, RecordsSkipCommentsBlanksAndCarriageReturns) {
  std::istringstream in("# header\r\n\r\nfirst\r\n  \nsecond\n");
  std::vector<std::pair<std::size_t, std::string>> seen;
  for_each_record(in, [&](std::size_t n, const std::string& line) {
    seen.emplace_back(n, line);
  });
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], std::make_pair(std::size_t{3}, std::string("first")));
  EXPECT_EQ(seen[1], std::make_pair(std::size_t{5}, std::string("second")));
}

TEST(Random, SameSeedSameStream) {
  Rng a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Random, BelowStaysInRangeAndCoversIt) {
  Rng rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Random, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NE(v, sorted);
}

}  // namespace
}  // namespace mlqa
