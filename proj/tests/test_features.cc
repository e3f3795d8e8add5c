#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mlqa/error.h"
#include "mlqa/features.h"
#include "mlqa/vector.h"

namespace mlqa {
namespace {

using Weights = std::map<std::string, double, std::less<>>;

struct Fixture {
  Question q;
  Corpus corpus;

  Fixture() {
    q.id = "q1";
    q.terms = {"child", "labor", "africa"};
    const std::vector<Weights> word = {{{"nino", 0.6}, {"chico", 0.4}},
                                       {{"trabajo", 1.0}},
                                       {}};
    const std::vector<Weights> grammar = {{{"nino", 1.0}},
                                          {{"trabajo", 0.5}, {"labor", 0.5}},
                                          {{"africa", 1.0}}};
    for (Method m : kMethods) {
      ProbabilisticQuery pq;
      pq.terms = q.terms;
      const auto& rows = m == Method::grammar ? grammar : word;
      for (const auto& r : rows) pq.distributions.emplace_back(r);
      q.translations[{Language::ar, m}] = pq;
    }
    corpus = Corpus({
        {"e1", "d1", Language::en, 0, {"child", "labor", "in", "africa"},
         {"child", "labor", "in", "africa"}, std::nullopt},
        {"a1", "d2", Language::ar, 0, {"el", "nino"}, {"the", "boy"}, std::nullopt},
        {"a2", "d2", Language::ar, 1, {"trabajo", "nino", "africa"},
         {"work", "child", "africa"}, "a1"},
    });
  }
};

// Hand-composed: cosine of the averaged translation against the sentence.
double oracle_cl(const std::vector<Weights>& rows, const Tokens& sentence) {
  Weights qv;
  for (const auto& r : rows) {
    for (const auto& [w, p] : r) qv[w] += p / static_cast<double>(rows.size());
  }
  Weights sv;
  for (const auto& t : sentence) sv[t] += 1.0 / static_cast<double>(sentence.size());
  double dot = 0, nq = 0, ns = 0;
  for (const auto& [w, x] : qv) {
    nq += x * x;
    auto it = sv.find(w);
    if (it != sv.end()) dot += x * it->second;
  }
  for (const auto& [w, x] : sv) ns += x * x;
  return dot / std::sqrt(nq * ns);
}

TEST(Features, CanonicalNames) {
  const auto& names = feature_names();
  EXPECT_EQ(names[0], "lexcl_word");
  EXPECT_EQ(names[1], "lexcl_10best");
  EXPECT_EQ(names[kLexQlSlot], "lexql");
  EXPECT_EQ(names[kPrevOffset + 3], "prev_lexcl_grammar");
}

TEST(Features, LexClMatchesHandComposedOracle) {
  Fixture f;
  const Candidate& a2 = f.corpus.at("a2");
  FeatureVector fv = featurize_pair(f.q, a2, f.corpus, {});
  const double word = oracle_cl({{{"nino", 0.6}, {"chico", 0.4}}, {{"trabajo", 1.0}}, {}},
                                a2.tokens);
  const double grammar = oracle_cl(
      {{{"nino", 1.0}}, {{"trabajo", 0.5}, {"labor", 0.5}}, {{"africa", 1.0}}},
      a2.tokens);
  EXPECT_NEAR(fv.values[lexcl_slot(Method::word)], word, 1e-12);
  EXPECT_NEAR(fv.values[lexcl_slot(Method::context)], word, 1e-12);
  EXPECT_NEAR(fv.values[lexcl_slot(Method::grammar)], grammar, 1e-12);
  // one-best: {work, child, africa} against {child, labor, africa}
  EXPECT_NEAR(fv.values[kLexQlSlot], 2.0 / 3.0, 1e-12);
  // previous sentence a1 = "el nino" / "the boy"
  EXPECT_NEAR(fv.values[kPrevOffset + lexcl_slot(Method::word)],
              oracle_cl({{{"nino", 0.6}, {"chico", 0.4}}, {{"trabajo", 1.0}}, {}},
                        {"el", "nino"}),
              1e-12);
  EXPECT_EQ(fv.values[kPrevOffset + kLexQlSlot], 0.0);
}

TEST(Features, NoPreviousSentenceMeansZeroPrevFeatures) {
  Fixture f;
  FeatureVector fv = featurize_pair(f.q, f.corpus.at("a1"), f.corpus, {});
  for (std::size_t k = kPrevOffset; k < kFeatureCount; ++k) EXPECT_EQ(fv.values[k], 0.0);
}

TEST(Features, EnglishUsesIdentityTranslation) {
  Fixture f;
  Question bare = f.q;
  bare.translations.clear();  // English needs no tables
  FeatureVector fv = featurize_pair(bare, f.corpus.at("e1"), f.corpus, {});
  const double expected = cosine(sentence_vector(bare.terms),
                                 sentence_vector(f.corpus.at("e1").tokens));
  EXPECT_NEAR(fv.values[kLexQlSlot], expected, 1e-12);
  for (Method m : kMethods) EXPECT_NEAR(fv.values[lexcl_slot(m)], expected, 1e-12);
}

TEST(Features, MaskingZeroesInactiveSlots) {
  Fixture f;
  FeatureSelection ql;
  ql.set = FeatureSet::lexql;
  Question bare = f.q;
  bare.translations.clear();  // LexQL needs no tables either
  FeatureVector fv = featurize_pair(bare, f.corpus.at("a2"), f.corpus, ql);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const bool expect_active = k == kLexQlSlot || k == kPrevOffset + kLexQlSlot;
    EXPECT_EQ(fv.active[k], expect_active) << k;
    if (!expect_active) {
      EXPECT_EQ(fv.values[k], 0.0);
    }
  }

  FeatureSelection no_grammar;
  no_grammar.methods[3] = false;
  auto mask = no_grammar.active_mask();
  EXPECT_FALSE(mask[lexcl_slot(Method::grammar)]);
  EXPECT_FALSE(mask[kPrevOffset + lexcl_slot(Method::grammar)]);
  EXPECT_TRUE(mask[lexcl_slot(Method::word)]);
}

TEST(Features, MissingTranslationNamesMethodAndLanguage) {
  Fixture f;
  f.q.translations.erase({Language::ar, Method::grammar});
  try {
    featurize_pair(f.q, f.corpus.at("a2"), f.corpus, {});
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("grammar"), std::string::npos);
    EXPECT_NE(msg.find("ar"), std::string::npos);
  }
}

TEST(Features, ValuesStayInUnitInterval) {
  Fixture f;
  for (const Candidate& c : f.corpus) {
    FeatureVector fv = featurize_pair(f.q, c, f.corpus, {});
    for (double v : fv.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(FeatureFile, RoundTrip) {
  Fixture f;
  std::vector<FeatureRow> rows;
  for (const Candidate& c : f.corpus) {
    FeatureRow r{"q1", c.id, featurize_pair(f.q, c, f.corpus, {})};
    r.features.label = c.id != "a1";
    rows.push_back(r);
  }
  rows[0].features.label.reset();
  std::stringstream buf;
  write_feature_rows(buf, rows);
  auto back = read_feature_rows(buf, "features.tsv");
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].candidate_id, rows[i].candidate_id);
    EXPECT_EQ(back[i].features.values, rows[i].features.values);
    EXPECT_EQ(back[i].features.active, rows[i].features.active);
    EXPECT_EQ(back[i].features.label, rows[i].features.label);
  }
}

TEST(FeatureFile, RejectsOutOfRangeValues) {
  std::istringstream in(
      "# active\t1\t1\t1\t1\t1\t1\t1\t1\t1\t1\n"
      "q1\tc1\t1\t0.5\t0.5\t0.5\t0.5\t1.5\t0\t0\t0\t0\t0\n");
  EXPECT_THROW(read_feature_rows(in, "f"), ParseError);
}

TEST(FeatureSetNames, Parse) {
  EXPECT_EQ(parse_feature_set("lexcl"), FeatureSet::lexcl);
  EXPECT_EQ(parse_feature_set("LexQL"), FeatureSet::lexql);
  EXPECT_EQ(parse_feature_set("both"), FeatureSet::both);
  EXPECT_THROW(parse_feature_set("lex"), Error);
}

}  // namespace
}  // namespace mlqa
